// Interactive concept network. Deterministic layered layout: a concept's
// est-un depth (served by the API) is its layer, roots on top, so snapshots
// are stable. est-un edges are solid, assertional edges dashed and labeled.

import { api } from "./api";
import { el, svgEl } from "./dom";
import type { GraphMode, Network } from "./types";

const NODE_W = 180;
const NODE_H = 44;
const GAP_X = 40;
const GAP_Y = 80;
const MARGIN = 30;

export interface GraphCallbacks {
  onSelectConcept(id: string): void;
  onModeChange(mode: GraphMode): void;
}

export async function renderGraphView(
  container: HTMLElement,
  mode: GraphMode,
  callbacks: GraphCallbacks,
): Promise<void> {
  const network = await api.network(mode);

  const bar = el("div", { class: "toolbar" });
  for (const m of ["hierarchy", "assertional", "full"] as GraphMode[]) {
    const labels = { hierarchy: "Hiérarchie", assertional: "Relations",
                     full: "Tout" };
    const button = el("button", {
      class: m === mode ? "mode active" : "mode",
      "data-mode": m,
    }, [labels[m]]);
    button.addEventListener("click", () => callbacks.onModeChange(m));
    bar.append(button);
  }
  container.append(bar);

  if (network.nodes.length === 0) {
    container.append(el("p", { class: "empty-state" }, [
      "Base vide : créez des termes et des concepts dans l'onglet Édition.",
    ]));
    return;
  }
  container.append(buildSvg(network, callbacks));
}

function buildSvg(network: Network, callbacks: GraphCallbacks): SVGElement {
  const layers = new Map<number, string[]>();
  for (const node of network.nodes) {
    const layer = layers.get(node.depth) ?? [];
    layer.push(node.id);
    layers.set(node.depth, layer);
  }
  const positions = new Map<string, { x: number; y: number }>();
  for (const [depth, ids] of layers) {
    ids.forEach((id, index) => {
      positions.set(id, {
        x: MARGIN + index * (NODE_W + GAP_X),
        y: MARGIN + depth * (NODE_H + GAP_Y),
      });
    });
  }
  const maxPerLayer = Math.max(...[...layers.values()].map(l => l.length));
  const depthCount = Math.max(...network.nodes.map(n => n.depth)) + 1;
  const width = MARGIN * 2 + maxPerLayer * (NODE_W + GAP_X);
  const height = MARGIN * 2 + depthCount * (NODE_H + GAP_Y);

  const svg = svgEl("svg", {
    class: "graph",
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    "data-testid": "graph-svg",
  });
  const defs = svgEl("defs");
  const marker = svgEl("marker", {
    id: "arrow", viewBox: "0 0 10 10", refX: "9", refY: "5",
    markerWidth: "7", markerHeight: "7", orient: "auto-start-reverse",
  }, [svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#5b6670" })]);
  defs.append(marker);
  svg.append(defs);

  for (const edge of network.edges) {
    const from = positions.get(edge.source);
    const to = positions.get(edge.target);
    if (!from || !to) continue;
    const x1 = from.x + NODE_W / 2;
    const y1 = from.y;
    const x2 = to.x + NODE_W / 2;
    const y2 = to.y + NODE_H;
    const line = svgEl("line", {
      x1: String(x1), y1: String(y1), x2: String(x2), y2: String(y2),
      class: edge.kind === "est-un" ? "edge-hierarchy" : "edge-assertional",
      "data-edge-kind": edge.kind,
      "data-source": edge.source,
      "data-target": edge.target,
      "marker-end": "url(#arrow)",
    });
    svg.append(line);
    if (edge.kind === "assertional") {
      svg.append(svgEl("text", {
        x: String((x1 + x2) / 2), y: String((y1 + y2) / 2 - 4),
        class: "edge-label",
      }, [edge.label]));
    }
  }

  for (const node of network.nodes) {
    const pos = positions.get(node.id)!;
    const group = svgEl("g", {
      class: "node",
      "data-node-id": node.id,
      transform: `translate(${pos.x},${pos.y})`,
    });
    group.append(svgEl("rect", {
      width: String(NODE_W), height: String(NODE_H), rx: "6",
    }));
    group.append(svgEl("text", {
      x: String(NODE_W / 2), y: String(NODE_H / 2 + 4),
      "text-anchor": "middle",
    }, [node.surface]));
    group.addEventListener("click", () => callbacks.onSelectConcept(node.id));
    svg.append(group);
  }
  return svg;
}
