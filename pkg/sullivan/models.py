from typing import Any, Dict, List
from enum import Enum
from sqlalchemy import (
    Column,
    Integer,
    String,
    Text,
    JSON,
    DateTime,
    ForeignKey,
)
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.orm import relationship
import datetime
import logging

# Setup logger
logger = logging.getLogger(__name__)

# Declarative base shared by the cache tables. Every cache file is its own
# SQLite database, so no schema prefix is used.
Base = declarative_base()

CACHE_FORMAT_VERSION = 1


class Flavor(str, Enum):
    """The four flavors of combinatorial 1-Sullivan diagrams."""
    UNPAR_UNEN = "unpar-unen"
    """Unparametrized, unenumerated: SD_g^m."""
    UNPAR_ENUM = "unpar-enum"
    """Unparametrized, enumerated: punctures and boundary cycles carry labels 1..m."""
    PAR_ENUM = "par-enum"
    """Parametrized, enumerated: leaves l_1..l_m on the incoming boundary."""
    PAR_UNEN = "par-unen"
    """Parametrized, unenumerated: leaves up to relabeling."""

    @property
    def parametrized(self) -> bool:
        return self in (Flavor.PAR_ENUM, Flavor.PAR_UNEN)

    @property
    def enumerated(self) -> bool:
        return self in (Flavor.UNPAR_ENUM, Flavor.PAR_ENUM)

    @property
    def unenumerated(self) -> "Flavor":
        """The flavor obtained by forgetting the enumeration."""
        return {
            Flavor.UNPAR_ENUM: Flavor.UNPAR_UNEN,
            Flavor.PAR_ENUM: Flavor.PAR_UNEN,
        }.get(self, self)

    @property
    def enumeration(self) -> "Flavor":
        """The flavor whose cells enumerate the incoming boundaries."""
        return {
            Flavor.UNPAR_UNEN: Flavor.UNPAR_ENUM,
            Flavor.PAR_UNEN: Flavor.PAR_ENUM,
        }.get(self, self)

    @property
    def symbol(self) -> str:
        return {
            Flavor.UNPAR_UNEN: "SD_g^m",
            Flavor.UNPAR_ENUM: "~SD_g^m",
            Flavor.PAR_ENUM: "~SD_{g,m}",
            Flavor.PAR_UNEN: "SD_{g,m}",
        }[self]


class CellStatus(str, Enum):
    """Status of a cell under a discrete Morse flow."""
    ESSENTIAL = "essential"
    COLLAPSIBLE = "collapsible"
    REDUNDANT = "redundant"


class CacheHeader(Base):
    """One row per cached component (flavor, g, m)."""
    __tablename__ = "complex_header"

    id: int = Column(Integer, primary_key=True)
    format_version: int = Column(Integer, nullable=False, default=CACHE_FORMAT_VERSION)
    flavor: str = Column(String, nullable=False, index=True)
    genus: int = Column(Integer, nullable=False)
    punctures: int = Column(Integer, nullable=False)
    top_degree: int = Column(Integer, nullable=False)
    counts: List[int] = Column(JSON, nullable=False)
    """Number of basis cells per degree, index = degree."""
    checksum: str = Column(String, nullable=False)
    """sha256 over the canonical payload of bases and boundary triplets."""
    created_at: datetime.datetime = Column(
        DateTime, default=datetime.datetime.utcnow, nullable=False
    )

    cells = relationship("CacheCell", back_populates="header", cascade="all, delete-orphan")
    entries = relationship("CacheBoundaryEntry", back_populates="header", cascade="all, delete-orphan")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "format_version": self.format_version,
            "flavor": self.flavor,
            "g": self.genus,
            "m": self.punctures,
            "top_degree": self.top_degree,
            "counts": list(self.counts or []),
            "checksum": self.checksum,
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }


class CacheCell(Base):
    """A basis cell of a cached complex, stored in canonical text form."""
    __tablename__ = "complex_cell"

    id: int = Column(Integer, primary_key=True)
    header_id: int = Column(Integer, ForeignKey("complex_header.id", ondelete="CASCADE"), nullable=False, index=True)
    degree: int = Column(Integer, nullable=False, index=True)
    position: int = Column(Integer, nullable=False)
    text: str = Column(Text, nullable=False)

    header = relationship("CacheHeader", back_populates="cells")

    def to_dict(self) -> Dict[str, Any]:
        return {"degree": self.degree, "position": self.position, "text": self.text}


class CacheBoundaryEntry(Base):
    """A nonzero entry of a boundary matrix ∂_degree (row in degree-1, column in degree)."""
    __tablename__ = "complex_boundary_entry"

    id: int = Column(Integer, primary_key=True)
    header_id: int = Column(Integer, ForeignKey("complex_header.id", ondelete="CASCADE"), nullable=False, index=True)
    degree: int = Column(Integer, nullable=False, index=True)
    row: int = Column(Integer, nullable=False)
    col: int = Column(Integer, nullable=False)
    coefficient: str = Column(String, nullable=False)
    """Decimal text, so coefficients of any size round-trip."""

    header = relationship("CacheHeader", back_populates="entries")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "row": self.row,
            "col": self.col,
            "coefficient": int(self.coefficient),
        }
