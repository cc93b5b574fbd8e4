import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    d = tmp_path_factory.mktemp("extricat-cache")
    old = os.environ.get("EXTRICAT_CACHE_DIR")
    os.environ["EXTRICAT_CACHE_DIR"] = str(d)
    yield d
    if old is None:
        os.environ.pop("EXTRICAT_CACHE_DIR", None)
    else:
        os.environ["EXTRICAT_CACHE_DIR"] = old


@pytest.fixture(scope="session")
def abelian():
    from extricat.shell.context import build_context
    from extricat.shell.scenario import builtin_scenario
    return build_context(builtin_scenario("paper-abelian"))


@pytest.fixture(scope="session")
def extri():
    from extricat.shell.context import build_context
    from extricat.shell.scenario import builtin_scenario
    return build_context(builtin_scenario("paper-extriangulated"))


@pytest.fixture(scope="session")
def modA(abelian):
    """The catalog of mod A."""
    return abelian.base


@pytest.fixture(scope="session")
def modB(abelian):
    """The catalog of mod B."""
    return abelian.ambient


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion
# ---------------------------------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """``criterion(n, ok, note)`` records one check of acceptance criterion n."""
    def record(n: int, ok: bool, note: str = "") -> bool:
        ACCEPTANCE.setdefault(n, []).append((ok, note))
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}{' - ' + note if note else ''}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(o for o, _ in parts)
        why = "; ".join(note for o, note in parts if not o and note)
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}"
                                    f"{'  (' + why + ')' if why else ''}")
