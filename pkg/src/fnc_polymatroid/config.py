"""
Configuration management for fnc-polymatroid.
"""

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional
import json


@dataclass
class LinalgConfig:
    """Finite-field arithmetic configuration."""

    # Field used when a caller does not name one
    default_q: int = 2

    # Largest prime accepted as a field modulus
    max_prime: int = 65521

    # Re-multiply every solve_right result and fail loudly on mismatch (test mode)
    check_solutions: bool = False


@dataclass
class PolymatroidConfig:
    """Dense rank tables and vector enumeration."""

    # Largest ground set held as a dense 2^r rank table
    max_ground_set: int = 20

    # Upper bound on prod(rho({i}) + 1) for member / excluded-vector enumeration
    member_budget: int = 2**24

    # Entries kept by a representation's rank cache
    rank_cache_size: int = 1 << 16


@dataclass
class SearchConfig:
    """Bounded search over linear network codes."""

    # Candidate assignments of the reduced space examined at most
    budget: int = 2**26

    # Candidates evaluated per vectorised batch
    chunk_size: int = 4096

    # Worker processes (1 = in-process)
    jobs: int = 1

    # Restrict coding edges to subspaces of their incoming space
    reduce: bool = True


@dataclass
class ConstructionConfig:
    """Network construction from a polymatroid."""

    # Demand-node policy: "exhaustive" or "select"
    policy: str = "exhaustive"


@dataclass
class MapSearchConfig:
    """Brute-force search for polymatroid maps (exponential)."""

    max_ground_set: int = 8
    max_edges: int = 10


@dataclass
class ServerConfig:
    """MCP server configuration."""

    # Enable debug logging
    debug: bool = False

    # Log file path (None = stderr only)
    log_file: Optional[str] = None


@dataclass
class Config:
    """Main configuration container."""

    linalg: LinalgConfig = field(default_factory=LinalgConfig)
    polymatroid: PolymatroidConfig = field(default_factory=PolymatroidConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    construction: ConstructionConfig = field(default_factory=ConstructionConfig)
    maps: MapSearchConfig = field(default_factory=MapSearchConfig)
    server: ServerConfig = field(default_factory=ServerConfig)

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "Config":
        """Load configuration from file or use defaults."""
        if path is None:
            candidates = [
                Path.cwd() / "fnc-polymatroid-config.json",
                Path.home() / ".fnc-polymatroid" / "config.json",
            ]
            for candidate in candidates:
                if candidate.exists():
                    path = candidate
                    break

        if path and path.exists():
            return cls.from_json(path)

        return cls()

    @classmethod
    def from_json(cls, path: Path) -> "Config":
        """Load configuration from JSON file. Unknown sections and keys are ignored."""
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)

        config = cls()
        for section in fields(config):
            values = data.get(section.name)
            if not isinstance(values, dict):
                continue
            target = getattr(config, section.name)
            for key, value in values.items():
                if hasattr(target, key):
                    setattr(target, key, value)

        return config

    def to_dict(self) -> dict:
        return {
            section.name: {
                f.name: getattr(getattr(self, section.name), f.name)
                for f in fields(getattr(self, section.name))
            }
            for section in fields(self)
        }

    def to_json(self, path: Path) -> None:
        """Save configuration to JSON file."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)


# Global configuration instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config.load()
    return _config


def set_config(config: Config) -> None:
    """Set the global configuration instance."""
    global _config
    _config = config
