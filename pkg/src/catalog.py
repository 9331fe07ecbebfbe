"""Named curves stored in data/curves.json"""
import os
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from constants import CURVES_FILE_NAME
from curve_data import CurveMatrix, Exponent, new_curve
from errors import CurveError


@dataclass
class CatalogEntry:
    name: str
    curve: CurveMatrix
    e_set: List[Exponent] = field(default_factory=list)
    partial: bool = False

    def to_json(self) -> Dict[str, Any]:
        entry = {
            "name": self.name,
            "k": list(self.curve.ks),
            "d": self.curve.d,
            "E": [alpha.to_json() for alpha in self.e_set],
        }
        if self.partial:
            entry["partial"] = True
        return entry


class CurveCatalog:
    """Curves by name, with the E-sets recorded for them"""

    def __init__(self, curves_file: str = None, curves_data: Dict[str, Any] = None):
        """
        Initialize the catalog.

        Args:
            curves_file: Path to JSON file (defaults to data/curves.json)
            curves_data: Catalog dict injected directly, same structure as the file
        """
        self.entries: Dict[str, CatalogEntry] = {}

        current_dir = os.path.dirname(os.path.abspath(__file__))
        default_path = os.path.join(current_dir, '..', 'data', CURVES_FILE_NAME)

        if curves_data is not None:
            self.set_curves_data(curves_data)
        else:
            self.load_curves(curves_file or default_path)

    def load_curves(self, curves_file: str):
        """
        Load curves from a JSON file.

        Args:
            curves_file: Path to JSON file with structure: {"curves": [{"name": str, "k": [int], "d": int, "E": [[a1, a2]]}]}
        """
        if not os.path.exists(curves_file):
            raise FileNotFoundError(f"Curves file not found: {curves_file}")

        with open(curves_file, 'r') as f:
            self.set_curves_data(json.load(f))

    def set_curves_data(self, data: Dict[str, Any]):
        """Inject catalog data directly (used for tests)."""
        self.entries = {}
        for item in data.get('curves', []):
            name = item['name']
            if name in self.entries:
                raise CurveError(f"Duplicate curve name in catalog: {name}")
            self.entries[name] = CatalogEntry(
                name=name,
                curve=new_curve(item['k'], item['d']),
                e_set=[Exponent.from_json(alpha) for alpha in item.get('E', [])],
                partial=bool(item.get('partial', False)),
            )

    def get(self, name: str) -> Optional[CatalogEntry]:
        return self.entries.get(name)

    def names(self) -> List[str]:
        return sorted(self.entries)

    def to_json(self) -> Dict[str, Any]:
        return {"curves": [self.entries[name].to_json() for name in self.names()]}
