"""Line-delimited JSON cache of decompositions.

One record per line, appended only. On read the last line for a given
(c, d, n) wins, so concurrent histories merge by concatenation.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from gmpy2 import mpz

from .orbit import digits_of
from .primitive import Decomposition

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CacheRecord:
    c: int
    d: int
    n: int
    b: str
    P: str
    N: str
    primes: tuple[tuple[str, int], ...] = ()
    status: str = "NotRequested"
    cofactor: str = "1"
    probable_primes: tuple[str, ...] = field(default=())

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.c, self.d, self.n)

    def check(self) -> bool:
        return mpz(self.P) * mpz(self.N) == abs(mpz(self.b))

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "d": self.d,
            "n": self.n,
            "b": self.b,
            "P": self.P,
            "N": self.N,
            "primes": [[p, e] for p, e in self.primes],
            "status": self.status,
            "cofactor": self.cofactor,
            "probable_primes": list(self.probable_primes),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CacheRecord":
        return cls(
            c=int(obj["c"]),
            d=int(obj["d"]),
            n=int(obj["n"]),
            b=str(obj["b"]),
            P=str(obj["P"]),
            N=str(obj["N"]),
            primes=tuple((str(p), int(e)) for p, e in obj.get("primes", [])),
            status=str(obj.get("status", "NotRequested")),
            cofactor=str(obj.get("cofactor", "1")),
            probable_primes=tuple(str(p) for p in obj.get("probable_primes", [])),
        )

    @classmethod
    def from_decomposition(cls, c: int, d: int, term, dec: Decomposition) -> "CacheRecord":
        primes = ()
        if dec.primitive_primes is not None:
            primes = tuple((str(p), int(e)) for p, e in dec.primitive_primes)
        return cls(
            c=c,
            d=d,
            n=dec.n,
            b=digits_of(term),
            P=digits_of(dec.primitive_part),
            N=digits_of(dec.nonprimitive_part),
            primes=primes,
            status=dec.factor_status.value,
            cofactor=digits_of(dec.unresolved),
            probable_primes=tuple(str(p) for p in dec.probable_primes),
        )


class DecompositionCache:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)

    def load(self) -> dict[tuple[int, int, int], CacheRecord]:
        records: dict[tuple[int, int, int], CacheRecord] = {}
        if not self.path.exists():
            return records
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = CacheRecord.from_json(json.loads(line))
                except (ValueError, KeyError, TypeError) as exc:
                    # a torn final line from a crashed writer is expected
                    log.warning("%s:%d: skipping unreadable record (%s)", self.path, lineno, exc)
                    continue
                records[rec.key] = rec
        return records

    def append(self, records) -> int:
        count = 0
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_json(), separators=(",", ":")) + "\n")
                fh.flush()
                count += 1
        return count
