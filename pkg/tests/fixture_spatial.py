"""The spatial-domain scenario used across the suite (the packaged demo base).

Fully built (with corpus and anchored usages) the base is diagnostics-clean.
"""

from tkb.demo import (  # noqa: F401  (re-exported for the tests)
    CORPUS_TEXT,
    GEO_DESCRIPTION,
    PARAGRAPH_1,
    PARAGRAPH_2,
    SATELLITE_DESCRIPTION,
    build_demo as build,
    find_span,
)
