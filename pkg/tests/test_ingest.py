import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mofminer.errors import FetchFailed, MalformedDoi, NotInCorpus
from mofminer.ingest import (
    DEFAULT_ROUTES,
    LocalCorpusFetcher,
    Publisher,
    PublisherRoute,
    clean_text,
    fetch_document,
    route_doi,
)

from conftest import FIXTURES


class TestRouting:
    def test_acs_prefix(self):
        assert route_doi("10.1021/acs.cgd.0c00000").publisher == Publisher.ACS

    def test_all_default_publishers(self):
        cases = {
            "10.1021/x": Publisher.ACS,
            "10.1039/x": Publisher.RSC,
            "10.1016/x": Publisher.ELSEVIER,
            "10.1002/x": Publisher.WILEY,
            "10.1007/x": Publisher.SPRINGER,
        }
        for doi, publisher in cases.items():
            assert route_doi(doi).publisher == publisher

    def test_unknown_prefix_routes_to_unknown(self):
        assert route_doi("10.9999/xyz").publisher == Publisher.UNKNOWN

    def test_malformed_doi(self):
        with pytest.raises(MalformedDoi):
            route_doi("not-a-doi")

    def test_longest_prefix_wins(self):
        table = DEFAULT_ROUTES + [PublisherRoute("10.10210", Publisher.WILEY, "special")]
        assert route_doi("10.10210/x", table).fetcher_id == "special"

    def test_routing_total_over_valid_dois(self):
        for suffix in ("a", "acs.cgd.1c01234", "j.ica.2020.119"):
            for prefix in ("10.1021", "10.5555", "10.123456789"):
                route = route_doi(f"{prefix}/{suffix}")
                assert isinstance(route.publisher, Publisher)


class TestFetching:
    def test_manifest_lookup(self):
        fetcher = LocalCorpusFetcher(FIXTURES / "corpus" / "manifest.json")
        payload, media = fetcher.fetch(route_doi("10.5555/mm.0001"), "10.5555/mm.0001")
        assert media == "text/plain"
        assert b"Synthesis of compound 1" in payload

    def test_absent_doi(self):
        fetcher = LocalCorpusFetcher(FIXTURES / "corpus" / "manifest.json")
        with pytest.raises(NotInCorpus):
            fetcher.fetch(route_doi("10.5555/mm.9999"), "10.5555/mm.9999")

    def test_entry_for_ccdc(self):
        fetcher = LocalCorpusFetcher(FIXTURES / "corpus" / "manifest.json")
        assert fetcher.entry_for_ccdc("abayuy").doi == "10.5555/mm.0001"
        assert fetcher.entry_for_ccdc("NOPE") is None

    def test_failing_plugin_surfaces_route_context(self):
        class Broken:
            def fetch(self, route, doi):
                raise RuntimeError("boom")

        route = PublisherRoute("10.1021", Publisher.ACS, "broken")
        with pytest.raises(FetchFailed, match="ACS"):
            fetch_document(route, "10.1021/x", {"broken": Broken()})

    def test_si_files_appended_after_marker(self, tmp_path):
        (tmp_path / "main.txt").write_text("main body")
        (tmp_path / "si-b.txt").write_text("second si")
        (tmp_path / "si-a.txt").write_text("first si")
        manifest = tmp_path / "manifest.json"
        manifest.write_text(
            '[{"doi": "10.1021/si", "path": "main.txt", "si_paths": ["si-b.txt", "si-a.txt"]}]'
        )
        fetcher = LocalCorpusFetcher(manifest)
        payload, _ = fetcher.fetch(route_doi("10.1021/si"), "10.1021/si")
        text = payload.decode()
        assert text.index("main body") < text.index("first si") < text.index("second si")
        assert "===SI===" in text


def block_count(text: str) -> int:
    # Soft hyphens are invisible, so a line holding only one reads as blank.
    visible = text.replace("­", "")
    blocks = [b for b in re.split(r"\n(?:[ \t]*\n)+", visible) if b.strip()]
    return len(blocks)


class TestCleaning:
    def test_dehyphenation(self):
        assert clean_text("syn-\nthesis") == "synthesis"

    def test_blank_line_normalization(self):
        assert clean_text("A\n\n\n\nB") == "A\n\nB"

    def test_already_clean_unchanged(self):
        text = "A mixture was heated.\n\nCrystals formed."
        assert clean_text(text) == text

    def test_ligature_folding(self):
        assert clean_text("puriﬁed") == "purified"

    def test_soft_hyphen_removed(self):
        assert "­" not in clean_text("syn­\nthesis rea­gent")
        assert clean_text("syn­\nthesis") == "synthesis"

    def test_space_runs_collapse(self):
        assert clean_text("a  \t b") == "a b"

    @settings(max_examples=200)
    @given(st.text(max_size=300))
    def test_idempotent(self, text):
        once = clean_text(text)
        assert clean_text(once) == once

    @settings(max_examples=200)
    @given(st.text(max_size=300))
    def test_no_control_chars_or_soft_hyphens(self, text):
        cleaned = clean_text(text)
        assert not re.search(r"[\x00-\x08\x0b-\x1f\x7f­]", cleaned)

    @settings(max_examples=200)
    @given(st.text(alphabet=st.sampled_from("ab \t\n-­"), max_size=120))
    def test_paragraph_count_never_increases(self, text):
        assert block_count(clean_text(text)) <= block_count(text)
