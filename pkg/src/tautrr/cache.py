"""Persistent cache for memoized integrals.

File format (line oriented, text):

    #taut-rr-cache v1
    g;d1,d2,...;b1,b2,...;num/den

one entry per line, keys sorted, empty field for an empty exponent or
kappa list.  Values with denominator 1 are written as a bare integer.
Save followed by load is the identity on entries, bit-exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .engine import CorrelatorEngine, CorrelatorKey

CACHE_MAGIC = "#taut-rr-cache"
CACHE_VERSION = "v1"


class CacheFormatError(ValueError):
    """Raised for unparseable cache files; the message names the bad line."""


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


@dataclass
class CacheStore:
    """Entries plus the version string of the engine that produced them."""

    entries: dict[CorrelatorKey, Fraction] = field(default_factory=dict)
    version: str = CACHE_VERSION

    @property
    def trusted(self) -> bool:
        return self.version == CACHE_VERSION

    def max_genus(self) -> int:
        return max((k.genus for k in self.entries), default=0)


def _format_key(key: CorrelatorKey) -> str:
    d = ",".join(str(x) for x in key.psi_exps)
    b = ",".join(str(x) for x in key.kappa_parts)
    return f"{key.genus};{d};{b}"


def _parse_int_list(text: str, lineno: int, what: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(piece) for piece in text.split(","))
    except ValueError:
        raise CacheFormatError(f"line {lineno}: bad {what} list {text!r}") from None


def cache_save(store: CacheStore, path) -> None:
    lines = [f"{CACHE_MAGIC} {store.version}"]
    for key in sorted(store.entries):
        lines.append(f"{_format_key(key)};{format_rational(store.entries[key])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cache_load(path) -> CacheStore:
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return CacheStore()
    lines = text.splitlines()
    header = lines[0].strip()
    if not header.startswith(CACHE_MAGIC):
        raise CacheFormatError("line 1: missing cache header")
    version = header[len(CACHE_MAGIC):].strip() or "(none)"
    entries: dict[CorrelatorKey, Fraction] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        pieces = line.split(";")
        if len(pieces) != 4:
            raise CacheFormatError(
                f"line {lineno}: expected 'g;d1,...;b1,...;value', got {raw!r}"
            )
        try:
            genus = int(pieces[0])
        except ValueError:
            raise CacheFormatError(f"line {lineno}: bad genus {pieces[0]!r}") from None
        d = _parse_int_list(pieces[1], lineno, "exponent")
        b = _parse_int_list(pieces[2], lineno, "kappa")
        try:
            value = parse_rational(pieces[3])
        except (ValueError, ZeroDivisionError):
            raise CacheFormatError(f"line {lineno}: bad value {pieces[3]!r}") from None
        entries[CorrelatorKey.make(genus, d, b)] = value
    return CacheStore(entries, version)


def save_engine_cache(engine: CorrelatorEngine, path) -> CacheStore:
    store = CacheStore(engine.entries())
    cache_save(store, path)
    return store


def load_engine_cache(engine: CorrelatorEngine, path) -> CacheStore:
    """Load a cache file into an engine.

    A version mismatch downgrades the entries to quarantined status: they
    are revalidated against a fresh computation on first use.
    """
    store = cache_load(path)
    if not store.trusted:
        warnings.warn(
            f"cache version {store.version!r} does not match {CACHE_VERSION!r}; "
            "entries will be revalidated on use"
        )
    engine.adopt(store.entries, trusted=store.trusted)
    return store
