"""Disk cache of summation rules, one JSON file per rule size."""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Literal, Tuple, Union

from pydantic import BaseModel, ValidationError

from gauss_summation.exceptions import CorruptCacheError, RuleNotFoundError
from gauss_summation.models import SummationRule
from gauss_summation.rule_core import build_rule

logger = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1

PathLike = Union[str, Path]


class CachedRuleFile(BaseModel):
    """Schema of a rule_<n>.json file."""

    version: Literal[1]
    n: int
    nodes: Tuple[float, ...]
    weights: Tuple[float, ...]


def rule_file_name(n: int) -> str:
    return f"rule_{n}.json"


def _format_floats(values: Tuple[float, ...]) -> str:
    return ", ".join(f"{v:.16e}" for v in values)


def _serialize(rule: SummationRule) -> str:
    # 17 significant digits reproduce every double exactly
    return (
        "{\n"
        f'  "version": {CACHE_FORMAT_VERSION},\n'
        f'  "n": {rule.n},\n'
        f'  "nodes": [{_format_floats(rule.nodes)}],\n'
        f'  "weights": [{_format_floats(rule.weights)}]\n'
        "}\n"
    )


def rule_cache_store(rule: SummationRule, path: PathLike) -> Path:
    """Write rule to <path>/rule_<n>.json, replacing any previous file atomically.

    Args:
        rule: rule to store
        path: cache directory, created if missing

    Returns:
        Path of the written file
    """
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / rule_file_name(rule.n)
    fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=".rule_", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(_serialize(rule))
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug(f"Stored {rule.n}-point rule in {target}")
    return target


def rule_cache_load(n: int, path: PathLike) -> SummationRule:
    """Load and validate the n-point rule from a cache directory.

    Raises:
        RuleNotFoundError: no file for n
        CorruptCacheError: unreadable file or a rule violating its invariants
    """
    target = Path(path) / rule_file_name(n)
    if not target.exists():
        raise RuleNotFoundError(f"No cached rule for n={n} in {path}", n=n)
    try:
        with open(target, "r", encoding="utf-8") as f:
            raw = json.load(f)
        cached = CachedRuleFile.model_validate(raw)
        if cached.n != n:
            raise CorruptCacheError(
                f"{target} holds a rule for n={cached.n}", path=str(target)
            )
        return SummationRule(n=cached.n, nodes=cached.nodes, weights=cached.weights)
    except (ValueError, ValidationError) as e:
        raise CorruptCacheError(
            f"Corrupt rule cache {target}: {e}", path=str(target)
        ) from e


class RuleCache:
    """Manages cached summation rules in a directory."""

    def __init__(self, cache_dir: PathLike):
        """Initialize rule cache.

        Args:
            cache_dir: Directory holding rule_<n>.json files
        """
        self.cache_dir = Path(cache_dir)

    def store(self, rule: SummationRule) -> Path:
        return rule_cache_store(rule, self.cache_dir)

    def load(self, n: int) -> SummationRule:
        return rule_cache_load(n, self.cache_dir)

    def get_or_build(self, n: int) -> SummationRule:
        """Return the cached n-point rule, building and storing it on a miss.

        A corrupt file is logged and replaced by a freshly built rule.
        """
        try:
            return self.load(n)
        except RuleNotFoundError:
            logger.debug(f"Cache miss for n={n}")
        except CorruptCacheError as e:
            logger.warning(f"{e}; rebuilding")
        rule = build_rule(n)
        try:
            self.store(rule)
        except OSError as e:
            logger.warning(f"Failed to cache rule n={n}: {e}")
        return rule

    def cached_sizes(self) -> List[int]:
        """Rule sizes with a file in the cache directory, ascending."""
        if not self.cache_dir.is_dir():
            return []
        sizes = []
        for entry in self.cache_dir.glob("rule_*.json"):
            suffix = entry.stem[len("rule_") :]
            if suffix.isdigit():
                sizes.append(int(suffix))
        return sorted(sizes)

    def get_cache_status(self) -> Dict:
        """Get status of the rule cache.

        Returns:
            Dictionary with cache statistics
        """
        sizes = self.cached_sizes()
        total_bytes = sum(
            (self.cache_dir / rule_file_name(n)).stat().st_size for n in sizes
        )
        return {
            "cache_dir": str(self.cache_dir),
            "total_rules": len(sizes),
            "sizes": sizes,
            "total_bytes": total_bytes,
        }

    def clear(self) -> int:
        """Delete every cached rule file.

        Returns:
            Number of files removed
        """
        removed_count = 0
        for n in self.cached_sizes():
            (self.cache_dir / rule_file_name(n)).unlink()
            removed_count += 1
        if removed_count > 0:
            logger.info(f"Removed {removed_count} cached rules from {self.cache_dir}")
        return removed_count
