import pytest

import fixture_spatial


@pytest.fixture
def spatial():
    """The fully built, anchored, diagnostics-clean spatial fixture."""
    return fixture_spatial.build()


@pytest.fixture
def spatial_bare():
    """The spatial fixture without corpus or anchors."""
    return fixture_spatial.build(with_corpus=False)
