import sys

import pytest

from niftyweb import autocomplete, handlers
from niftyweb.adapter import ProgramSpec
from niftyweb.errors import BadQuery
from niftyweb.grammar import parse_grammar
from niftyweb.http1 import parse_query_string
from tests.conftest import CITIES_TSV


def params(raw):
    return parse_query_string(raw)


@pytest.fixture(scope="module")
def cities_handler():
    return handlers.autocomplete_handler(autocomplete.load_terms_file(CITIES_TSV))


class TestAutocompleteHandler:
    def test_fig1_rows_with_links(self, cities_handler):
        results = cities_handler(params("q=Sea"))
        assert [r.weight for r in results] == [608660, 33025, 26909, 24168, 22858]
        assert all(r.link.startswith("https://www.google.com/maps/")
                   for r in results)

    def test_empty_query_returns_nothing(self, cities_handler):
        assert cities_handler(params("q=")) == []
        assert cities_handler(params("")) == []

    def test_max_param(self, cities_handler):
        assert len(cities_handler(params("q=Sea&max=2"))) == 2

    def test_bad_max(self, cities_handler):
        with pytest.raises(BadQuery):
            cities_handler(params("q=Sea&max=-1"))
        with pytest.raises(BadQuery):
            cities_handler(params("q=Sea&max=abc"))


class TestLettersHandler:
    def test_canonical_first_then_rows(self):
        handler = handlers.letters_handler()
        results = handler(params("q=AaB%21b"))
        assert results[0].label == "[aabb]"
        assert [r.label for r in results[1:]] == ["a: 2", "b: 2"]
        assert all(r.weight == 0 for r in results)

    def test_empty_query(self):
        results = handlers.letters_handler()(params("q="))
        assert [r.label for r in results] == ["[]"]


class TestRsgHandler:
    GRAMMAR = parse_grammar("<s> ::= go <t>\n<t> ::= left | right")

    def test_seeded_is_deterministic(self):
        handler = handlers.rsg_handler(self.GRAMMAR)
        first = [r.label for r in handler(params("seed=42&max=4"))]
        second = [r.label for r in handler(params("seed=42&max=4"))]
        assert first == second
        assert all(s.startswith("go ") for s in first)

    def test_query_names_start_nonterminal(self):
        handler = handlers.rsg_handler(self.GRAMMAR)
        labels = [r.label for r in handler(params("q=t&seed=1&max=3"))]
        assert set(labels) <= {"left", "right"}

    def test_bracketed_query_accepted(self):
        handler = handlers.rsg_handler(self.GRAMMAR)
        assert handler(params("q=%3Ct%3E&seed=1"))  # "<t>"

    def test_unknown_start_is_bad_query(self):
        handler = handlers.rsg_handler(self.GRAMMAR)
        with pytest.raises(BadQuery):
            handler(params("q=nope"))

    def test_seedless_forbids_seed(self):
        handler = handlers.rsg_handler(self.GRAMMAR, seedless=True)
        with pytest.raises(BadQuery):
            handler(params("seed=1"))
        assert handler(params("max=1"))  # clock-seeded path still works

    def test_out_of_range_seed(self):
        handler = handlers.rsg_handler(self.GRAMMAR)
        with pytest.raises(BadQuery):
            handler(params("seed=18446744073709551616"))


class TestProgramHandler:
    def test_oneshot(self):
        spec = ProgramSpec(argv=[sys.executable, "-c",
                                 "import sys; print('7 got ' + sys.argv[1])"])
        handler = handlers.program_handler(spec)
        results = handler(params("q=abc"))
        assert [(r.weight, r.label) for r in results] == [(7, "got abc")]

    def test_session_exposes_runner(self):
        code = ('import sys\n'
                'for line in sys.stdin:\n'
                '    print("1 " + line.rstrip())\n'
                '    print(flush=True)\n')
        spec = ProgramSpec(argv=[sys.executable, "-c", code], mode="session")
        handler = handlers.program_handler(spec)
        try:
            assert handler(params("q=x"))[0].label == "x"
            pid = handler.runner.child_pid()
            assert handler(params("q=y"))[0].label == "y"
            assert handler.runner.child_pid() == pid
        finally:
            handler.runner.close()
