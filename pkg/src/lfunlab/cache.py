"""On-disk cache for character tables and L-value vectors.

Character tables are stored as .npz archives of the integer exponent
matrices: the representation is exact, so a cache hit is bit-identical to a
rebuild.  L-value vectors are stored as JSON with the real and imaginary
parts printed to 17 significant digits, which round-trips IEEE doubles
exactly.  Every entry carries a format version; a version mismatch is a
cache miss, and an unreadable entry is deleted with a warning and
recomputed by the caller.
"""

from __future__ import annotations

import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .chars import CharacterTable, GroupComponent

log = logging.getLogger("lfunlab")

CACHE_VERSION = 1
CACHE_DIR_ENV = "LFUNLAB_CACHE_DIR"


def default_cache_dir() -> str:
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "lfunlab")


def _atomic_write(path: str, data: bytes) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class ReportCache:
    """Handle on one cache directory; safe to construct per worker process."""

    directory: str

    def _table_path(self, q: int) -> str:
        return os.path.join(self.directory, f"table_q{q}.npz")

    def _lvec_path(self, q: int, a_num: int, a_den: int, method: str) -> str:
        return os.path.join(self.directory, f"lvec_q{q}_a{a_num}_{a_den}_{method}.json")

    def _discard(self, path: str, reason: Exception) -> None:
        log.warning("discarding corrupt cache entry %s (%s)", path, reason)
        try:
            os.unlink(path)
        except OSError:
            pass

    # -- character tables ---------------------------------------------------

    def put_table(self, table: CharacterTable) -> None:
        meta = {
            "version": CACHE_VERSION,
            "q": table.q,
            "phi": table.phi,
            "exponent": table.exponent,
            "components": [
                [c.prime_power, list(c.generators), list(c.orders)] for c in table.components
            ],
        }
        buf = io.BytesIO()
        np.savez(
            buf,
            meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8),
            value_exponents=table.value_exponents,
            conjugate_map=table.conjugate_map,
        )
        _atomic_write(self._table_path(table.q), buf.getvalue())

    def get_table(self, q: int) -> CharacterTable | None:
        path = self._table_path(q)
        if not os.path.exists(path):
            return None
        try:
            with np.load(path, allow_pickle=False) as archive:
                meta = json.loads(bytes(archive["meta"]).decode())
                if meta.get("version") != CACHE_VERSION or meta.get("q") != q:
                    return None
                exps = np.array(archive["value_exponents"], dtype=np.int32)
                conj = np.array(archive["conjugate_map"], dtype=np.int64)
        except Exception as exc:
            self._discard(path, exc)
            return None
        if exps.shape != (meta["phi"], q):
            self._discard(path, ValueError(f"shape {exps.shape}"))
            return None
        components = tuple(
            GroupComponent(pk, tuple(gens), tuple(orders))
            for pk, gens, orders in meta["components"]
        )
        return CharacterTable(
            q=q,
            phi=meta["phi"],
            exponent=meta["exponent"],
            components=components,
            value_exponents=exps,
            conjugate_map=conj,
        )

    # -- L-value vectors ----------------------------------------------------

    def put_lvec(self, q: int, a_num: int, a_den: int, method: str, vec: np.ndarray) -> None:
        record = {
            "version": CACHE_VERSION,
            "q": q,
            "a_num": a_num,
            "a_den": a_den,
            "method": method,
            "re": [format(float(v.real), ".17g") for v in vec],
            "im": [format(float(v.imag), ".17g") for v in vec],
        }
        payload = json.dumps(record).encode()
        _atomic_write(self._lvec_path(q, a_num, a_den, method), payload)

    def get_lvec(self, q: int, a_num: int, a_den: int, method: str) -> np.ndarray | None:
        path = self._lvec_path(q, a_num, a_den, method)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "rb") as handle:
                record = json.loads(handle.read().decode())
            if record.get("version") != CACHE_VERSION:
                return None
            if (record.get("q"), record.get("a_num"), record.get("a_den"), record.get("method")) != (
                q,
                a_num,
                a_den,
                method,
            ):
                return None
            re = np.array([float(s) for s in record["re"]])
            im = np.array([float(s) for s in record["im"]])
        except Exception as exc:
            self._discard(path, exc)
            return None
        if re.shape != im.shape:
            self._discard(path, ValueError("length mismatch"))
            return None
        return re + 1j * im

    # -- maintenance ----------------------------------------------------------

    def entries(self) -> list[str]:
        if not os.path.isdir(self.directory):
            return []
        return sorted(
            name
            for name in os.listdir(self.directory)
            if name.startswith(("table_", "lvec_")) and not name.endswith(".tmp")
        )

    def clear(self) -> int:
        removed = 0
        for name in self.entries():
            try:
                os.unlink(os.path.join(self.directory, name))
                removed += 1
            except OSError:
                pass
        return removed
