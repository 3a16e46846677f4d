import pytest

import chorefair.envy_graph as envy_graph
from chorefair.core import is_alpha_efx

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def cycle_removal_guard(monkeypatch):
    """Wrap cycle elimination so every single cycle removal is checked to
    preserve the 1-EFX and 2-EFX verdicts; returns the list of removals."""
    removals: list = []
    original = envy_graph.eliminate_top_trading_cycles

    def guarded(alloc, instance, on_cycle_removed=None):
        state = {"prev": alloc}

        def hook(cycle, snapshot):
            prev = state["prev"]
            for alpha in (1, 2):
                if is_alpha_efx(prev, instance, alpha):
                    assert is_alpha_efx(snapshot, instance, alpha), (
                        f"cycle removal {cycle} broke the {alpha}-EFX verdict")
            removals.append(cycle)
            state["prev"] = snapshot
            if on_cycle_removed is not None:
                on_cycle_removed(cycle, snapshot)

        return original(alloc, instance, hook)

    monkeypatch.setattr(envy_graph, "eliminate_top_trading_cycles", guarded)
    return removals
