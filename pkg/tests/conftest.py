import pytest

from rootgame import build_embedding, build_root_system


@pytest.fixture(scope="session")
def a2():
    return build_root_system("A2")


@pytest.fixture(scope="session")
def a3():
    return build_root_system("A3")


@pytest.fixture(scope="session")
def a4():
    return build_root_system("A4")


@pytest.fixture(scope="session")
def b2():
    return build_root_system("B2")


@pytest.fixture(scope="session")
def b3():
    return build_root_system("B3")


@pytest.fixture(scope="session")
def g2():
    return build_root_system("G2")


@pytest.fixture(scope="session")
def diag_a4_3():
    return build_embedding("diag(id:A4,id:A4,id:A4)")


@pytest.fixture(scope="session")
def diag_a3_3():
    return build_embedding("diag(id:A3,id:A3,id:A3)")


@pytest.fixture(scope="session")
def so8():
    return build_embedding("so-in-sl:8")


@pytest.fixture(scope="session")
def so7():
    return build_embedding("so-in-sl:7")


@pytest.fixture(scope="session")
def branch5():
    return build_embedding("diag(so-in-sl:5,id:B2)")


@pytest.fixture(scope="session")
def g2_branch():
    return build_embedding("diag(sl3-in-g2,id:A2)")
