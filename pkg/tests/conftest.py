import pytest

from aisemi.constructions import block_semiring, catalog, partition_systems_up_to_iso, word_semiring

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def small_semirings():
    """A mixed bag of valid ai-semirings with at most 8 elements."""
    out = {name: catalog(name) for name in ("S7", "S7_0", "S53", "M2", "Sc_a", "S4_84", "S4_94",
                                            "S4_117", "S4_123", "S4_173", "S4_282", "S4_359")}
    out["Sc_ab"] = word_semiring(["ab"])
    out["Sc_abc"] = word_semiring(["abc"])
    out["S_ab"] = word_semiring(["ab"], commutative=False)
    out["Mc_a"] = word_semiring(["a"], with_identity=True)
    for i, F in enumerate(partition_systems_up_to_iso(3)):
        out[f"block3_{i}"] = block_semiring(F)
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
