import pytest

from planforge.samples import sample_instance

ACCEPTANCE = {}


def record(number, name, passed, detail=""):
    """Remember one acceptance verdict for the end-of-run summary."""
    ACCEPTANCE[number] = (name, bool(passed), detail)
    line = f"[acceptance {number}] {'PASS' if passed else 'FAIL'}: {name}"
    print(line + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[n]
        text = f"{n}. {'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            text += f"  [{detail}]"
        terminalreporter.write_line(text)


@pytest.fixture(scope="session")
def sample():
    return sample_instance()
