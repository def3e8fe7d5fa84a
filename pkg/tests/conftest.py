import pytest

from normplane import gallery


@pytest.fixture(scope="session")
def euclid():
    return gallery.get("euclidean")


@pytest.fixture(scope="session")
def l1():
    return gallery.get("l1")


@pytest.fixture(scope="session")
def linf():
    return gallery.get("linf")


@pytest.fixture(scope="session")
def l1_5():
    return gallery.get("l1_5")


@pytest.fixture(scope="session")
def l4():
    return gallery.get("l4")


@pytest.fixture(scope="session")
def mix():
    return gallery.get("quadrant_mix")


@pytest.fixture(scope="session")
def hybrid():
    return gallery.get("l2_l1_hybrid")


@pytest.fixture(scope="session")
def pig():
    return gallery.get("grandpa_pig")


@pytest.fixture(scope="session")
def pig_strict():
    return gallery.get("grandpa_pig_strict")


@pytest.fixture(scope="session")
def blend_l4():
    return gallery.get("blend_l4")


@pytest.fixture(scope="session")
def spliced():
    return gallery.get("spliced")


@pytest.fixture(scope="session")
def nobst_model():
    return gallery.get("nobst")


@pytest.fixture(scope="session")
def ellipse_2_1():
    return gallery.get("ellipse_2_1")


@pytest.fixture(scope="session")
def hexagon():
    return gallery.get("hexagon")


@pytest.fixture(scope="session")
def all_gallery():
    return gallery.all_models()
