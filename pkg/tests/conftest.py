import os

import pytest

from forestbound.graphio import parse_graph

HERE = os.path.dirname(__file__)
CORPUS = os.path.join(os.path.dirname(HERE), "corpus")


def corpus_sources():
    """Every graph source in the regression corpus (files and family specs)."""
    out = []
    for fname in sorted(os.listdir(CORPUS)):
        path = os.path.join(CORPUS, fname)
        if fname == "families.txt":
            with open(path) as fh:
                for line in fh:
                    spec = line.split("#", 1)[0].strip()
                    if spec:
                        out.append(spec)
        else:
            out.append(path)
    return out


@pytest.fixture(scope="session")
def fifteen():
    return parse_graph(os.path.join(CORPUS, "fifteen.edges"))


ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[k])
