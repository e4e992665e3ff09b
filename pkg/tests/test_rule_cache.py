"""Tests for the on-disk rule cache."""

import json

import pytest

from gauss_summation.exceptions import CorruptCacheError, RuleNotFoundError
from gauss_summation.rule_cache import (
    RuleCache,
    rule_cache_load,
    rule_cache_store,
    rule_file_name,
)
from gauss_summation.rule_core import build_rule


class TestStoreLoad:
    """Test storing and loading single rules."""

    def test_round_trip_is_bit_identical(self, tmp_path):
        """A stored rule loads back with identical nodes and weights."""
        rule = build_rule(8)
        path = rule_cache_store(rule, tmp_path)
        loaded = rule_cache_load(8, tmp_path)

        assert path == tmp_path / "rule_8.json"
        assert loaded.nodes == rule.nodes
        assert loaded.weights == rule.weights

    def test_file_format(self, tmp_path):
        """Files are versioned, UTF-8 JSON ending in a newline."""
        rule_cache_store(build_rule(3), tmp_path)
        raw = (tmp_path / rule_file_name(3)).read_bytes()

        assert raw.endswith(b"\n")
        assert b"\r" not in raw
        payload = json.loads(raw.decode("utf-8"))
        assert payload["version"] == 1
        assert payload["n"] == 3
        assert len(payload["nodes"]) == len(payload["weights"]) == 3

    def test_creates_directory(self, tmp_path):
        """Missing cache directories are created."""
        target = tmp_path / "a" / "b"
        rule_cache_store(build_rule(2), target)
        assert (target / "rule_2.json").exists()

    def test_missing_rule(self, tmp_path):
        """Loading a rule that was never stored fails with not-found."""
        with pytest.raises(RuleNotFoundError) as excinfo:
            rule_cache_load(5, tmp_path)
        assert excinfo.value.n == 5
        assert isinstance(excinfo.value, FileNotFoundError)

    def test_tampered_weight_sign(self, tmp_path):
        """A negative weight fails the rule invariants on load."""
        path = rule_cache_store(build_rule(4), tmp_path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["weights"][1] = -payload["weights"][1]
        path.write_text(json.dumps(payload), encoding="utf-8")

        with pytest.raises(CorruptCacheError) as excinfo:
            rule_cache_load(4, tmp_path)
        assert excinfo.value.path == str(path)

    def test_unparsable_file(self, tmp_path):
        """Text that is not JSON is reported as corrupt."""
        (tmp_path / "rule_2.json").write_text("not json\n", encoding="utf-8")
        with pytest.raises(CorruptCacheError):
            rule_cache_load(2, tmp_path)

    def test_size_mismatch(self, tmp_path):
        """A file holding a different rule size is corrupt."""
        path = rule_cache_store(build_rule(3), tmp_path)
        path.rename(tmp_path / "rule_4.json")
        with pytest.raises(CorruptCacheError):
            rule_cache_load(4, tmp_path)

    def test_unknown_version(self, tmp_path):
        """Only format version 1 is accepted."""
        path = rule_cache_store(build_rule(2), tmp_path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["version"] = 2
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(CorruptCacheError):
            rule_cache_load(2, tmp_path)


class TestRuleCache:
    """Test the RuleCache manager."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rule = build_rule(6)

    def test_get_or_build_stores_on_miss(self, tmp_path):
        """A miss builds the rule and writes it."""
        cache = RuleCache(tmp_path)
        rule = cache.get_or_build(6)

        assert rule.nodes == self.rule.nodes
        assert cache.cached_sizes() == [6]
        assert cache.get_or_build(6).weights == self.rule.weights

    def test_corrupt_file_is_rebuilt(self, tmp_path):
        """A corrupt file is replaced by a freshly built rule."""
        (tmp_path / "rule_6.json").write_text("{}\n", encoding="utf-8")
        cache = RuleCache(tmp_path)

        assert cache.get_or_build(6).nodes == self.rule.nodes
        assert cache.load(6).nodes == self.rule.nodes

    def test_status_and_clear(self, tmp_path):
        """Status lists cached sizes; clear removes them."""
        cache = RuleCache(tmp_path)
        for n in (3, 1, 10):
            cache.store(build_rule(n))
        (tmp_path / "notes.txt").write_text("kept\n", encoding="utf-8")

        status = cache.get_cache_status()
        assert status["total_rules"] == 3
        assert status["sizes"] == [1, 3, 10]
        assert status["total_bytes"] > 0
        assert status["cache_dir"] == str(tmp_path)

        assert cache.clear() == 3
        assert cache.cached_sizes() == []
        assert (tmp_path / "notes.txt").exists()

    def test_missing_directory(self, tmp_path):
        """A cache directory that does not exist is empty."""
        cache = RuleCache(tmp_path / "absent")
        assert cache.cached_sizes() == []
        assert cache.get_cache_status()["total_rules"] == 0
        assert cache.clear() == 0
