"""
On-disk cache of built chain complexes.

One SQLite database per component at ``<cache_dir>/<flavor>_g<g>_m<m>.sqlite``,
holding a versioned header, the bases in canonical text form and the boundary
matrices as triplets. A sha256 checksum over the canonical payload guards
against corrupt or tampered files.
"""

import hashlib
import json
import logging
import os
from typing import Dict, List, Optional

from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker

from .complex import ChainComplex, SparseMatrix
from .diagram import Diagram
from .exceptions import CacheError, SullivanError
from .models import (
    CACHE_FORMAT_VERSION,
    Base,
    CacheBoundaryEntry,
    CacheCell,
    CacheHeader,
    Flavor,
)

logger = logging.getLogger(__name__)


def payload_checksum(flavor: str, g: int, m: int, bases: List[List[str]], entries: List[List[int]]) -> str:
    """sha256 of the canonical JSON payload of a complex."""
    payload = {
        "format_version": CACHE_FORMAT_VERSION,
        "flavor": flavor,
        "g": g,
        "m": m,
        "bases": bases,
        "entries": [[d, r, c, str(v)] for d, r, c, v in entries],
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")).hexdigest()


def _complex_payload(complex_: ChainComplex):
    bases = [[cell.to_text() for cell in basis] for basis in complex_.bases]
    entries = [
        [k, r, c, v]
        for k in range(1, len(complex_.bases))
        for r, c, v in complex_.boundary_matrix(k).entries()
    ]
    return bases, entries


class ComplexCache:
    """SQLite-backed store of chain complexes keyed by component.

    Attributes:
        hits: Number of successful loads.
        misses: Number of loads that found no cache file.
        stores: Number of complexes written.
    """

    def __init__(self, cache_dir: str):
        self.cache_dir = os.path.expanduser(cache_dir)
        self.hits = 0
        self.misses = 0
        self.stores = 0

    def path(self, flavor: Flavor, g: int, m: int) -> str:
        return os.path.join(self.cache_dir, f"{Flavor(flavor).value}_g{g}_m{m}.sqlite")

    def _session(self, path: str):
        engine = create_engine(f"sqlite:///{path}")
        Base.metadata.create_all(engine)
        SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)
        return engine, SessionLocal()

    def exists(self, flavor: Flavor, g: int, m: int) -> bool:
        return os.path.exists(self.path(flavor, g, m))

    def cache_store(self, complex_: ChainComplex) -> str:
        """Write a complex, replacing any previous entry for its component.

        Returns:
            Path of the cache file.
        """
        if complex_.component is None:
            raise CacheError("only component complexes can be cached")
        flavor, g, m = complex_.component
        flavor = Flavor(flavor)
        os.makedirs(self.cache_dir, exist_ok=True)
        path = self.path(flavor, g, m)
        bases, entries = _complex_payload(complex_)
        checksum = payload_checksum(flavor.value, g, m, bases, entries)
        engine, session = self._session(path)
        try:
            for header in session.query(CacheHeader).all():
                session.delete(header)
            header = CacheHeader(
                format_version=CACHE_FORMAT_VERSION,
                flavor=flavor.value,
                genus=g,
                punctures=m,
                top_degree=complex_.top_degree,
                counts=complex_.counts(),
                checksum=checksum,
            )
            session.add(header)
            session.flush()
            session.bulk_save_objects(
                [
                    CacheCell(header_id=header.id, degree=k, position=i, text=text)
                    for k, basis in enumerate(bases)
                    for i, text in enumerate(basis)
                ]
            )
            session.bulk_save_objects(
                [
                    CacheBoundaryEntry(header_id=header.id, degree=k, row=r, col=c, coefficient=str(v))
                    for k, r, c, v in entries
                ]
            )
            session.commit()
        except SQLAlchemyError as e:
            session.rollback()
            logger.error(f"Failed to store {path}: {e}", exc_info=True)
            raise CacheError(f"cannot write cache file {path}: {e}") from e
        finally:
            session.close()
            engine.dispose()
        self.stores += 1
        logger.info(f"Cached {flavor.value} g={g} m={m} at {path}")
        return path

    def cache_load(self, flavor: Flavor, g: int, m: int) -> Optional[ChainComplex]:
        """Load a cached complex.

        Returns:
            The complex, or None when no cache file exists.

        Raises:
            CacheError: On version or checksum mismatch or an unreadable file.
        """
        flavor = Flavor(flavor)
        path = self.path(flavor, g, m)
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            engine, session = self._session(path)
        except SQLAlchemyError as e:
            logger.error(f"Unreadable cache file {path}: {e}")
            raise CacheError(f"unreadable cache file {path}: {e}") from e
        try:
            header = session.query(CacheHeader).one_or_none()
            if header is None:
                raise CacheError(f"cache file {path} has no header")
            if header.format_version != CACHE_FORMAT_VERSION:
                raise CacheError(
                    f"cache file {path} has format version {header.format_version}, expected {CACHE_FORMAT_VERSION}"
                )
            if (header.flavor, header.genus, header.punctures) != (flavor.value, g, m):
                raise CacheError(f"cache file {path} holds {header.to_dict()}")
            counts = list(header.counts or [])
            bases: List[List[str]] = [[""] * n for n in counts]
            for cell in session.query(CacheCell).filter(CacheCell.header_id == header.id):
                bases[cell.degree][cell.position] = cell.text
            entries = [
                [e.degree, e.row, e.col, int(e.coefficient)]
                for e in session.query(CacheBoundaryEntry)
                .filter(CacheBoundaryEntry.header_id == header.id)
                .order_by(CacheBoundaryEntry.degree, CacheBoundaryEntry.col, CacheBoundaryEntry.row)
            ]
            checksum = header.checksum
        except SQLAlchemyError as e:
            logger.error(f"Unreadable cache file {path}: {e}")
            raise CacheError(f"unreadable cache file {path}: {e}") from e
        except (IndexError, ValueError, TypeError) as e:
            logger.error(f"Corrupt cache file {path}: {e}")
            raise CacheError(f"corrupt cache file {path}: {e}") from e
        finally:
            session.close()
            engine.dispose()

        if payload_checksum(flavor.value, g, m, bases, entries) != checksum:
            logger.error(f"Checksum mismatch in {path}")
            raise CacheError(f"checksum mismatch in cache file {path}")
        try:
            cells = [[Diagram.parse(text) for text in basis] for basis in bases]
        except SullivanError as e:
            raise CacheError(f"cache file {path} holds an invalid cell: {e}") from e
        columns: Dict[int, List[Dict[int, int]]] = {k: [{} for _ in cells[k]] for k in range(1, len(cells))}
        for k, r, c, v in entries:
            columns[k][c][r] = v
        matrices = {k: SparseMatrix(len(cells[k - 1]), cols) for k, cols in columns.items()}
        self.hits += 1
        logger.info(f"Loaded {flavor.value} g={g} m={m} from {path}")
        return ChainComplex(cells, matrices, component=(flavor, g, m))

    def clear(self, flavor: Optional[Flavor] = None, g: Optional[int] = None, m: Optional[int] = None) -> List[str]:
        """Delete cache files, all of them or one component's."""
        removed = []
        if not os.path.isdir(self.cache_dir):
            return removed
        if flavor is not None and g is not None and m is not None:
            targets = [self.path(flavor, g, m)]
        else:
            targets = [os.path.join(self.cache_dir, f) for f in sorted(os.listdir(self.cache_dir)) if f.endswith(".sqlite")]
        for target in targets:
            if os.path.exists(target):
                os.remove(target)
                removed.append(target)
        logger.info(f"Removed {len(removed)} cache file(s) from {self.cache_dir}")
        return removed

    def list_entries(self) -> List[Dict]:
        """Headers of all cached components."""
        found = []
        if not os.path.isdir(self.cache_dir):
            return found
        for name in sorted(os.listdir(self.cache_dir)):
            if not name.endswith(".sqlite"):
                continue
            try:
                engine, session = self._session(os.path.join(self.cache_dir, name))
            except SQLAlchemyError as e:
                logger.warning(f"Skipping unreadable cache file {name}: {e}")
                continue
            try:
                header = session.query(CacheHeader).one_or_none()
                if header is not None:
                    found.append(header.to_dict())
            except SQLAlchemyError as e:
                logger.warning(f"Skipping unreadable cache file {name}: {e}")
            finally:
                session.close()
                engine.dispose()
        return found
