"""Helper script to scan all monomial curves up to a degree and catalog the non Cohen-Macaulay ones"""
import json
import sys
from itertools import combinations
from math import gcd
from functools import reduce
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from catalog import CatalogEntry
from curve_data import new_curve
from errors import BoundExceededError
from semigroup import e_set


def curve_name(ks, d) -> str:
    return f"k{'-'.join(str(k) for k in ks)}-d{d}"


def scan_curves(max_degree: int, min_degree: int = 2):
    """
    Enumerate every curve 0 < k1 < ... < km < d with gcd 1 and d in [min_degree, max_degree].

    Returns:
        Tuple (catalog entries with nonempty E-set, number of curves scanned, names hitting the cap)
    """
    entries = []
    scanned = 0
    capped = []
    for d in range(min_degree, max_degree + 1):
        for m in range(1, d):
            for ks in combinations(range(1, d), m):
                if reduce(gcd, ks, d) != 1:
                    continue
                scanned += 1
                curve = new_curve(list(ks), d)
                try:
                    found = e_set(curve)
                except BoundExceededError:
                    capped.append(curve_name(ks, d))
                    continue
                if found:
                    entries.append(CatalogEntry(curve_name(ks, d), curve, found))
    return entries, scanned, capped


def write_catalog(max_degree: int, output_file: str = None, min_degree: int = 2):
    """
    Scan curves and write the non Cohen-Macaulay ones to a JSON catalog.

    Args:
        max_degree: Largest degree d to scan
        output_file: Path to output JSON file (default: data/non_cm_curves.json)
        min_degree: Smallest degree d to scan
    """
    # Default output path
    if output_file is None:
        script_dir = Path(__file__).parent
        output_file = script_dir.parent / 'data' / 'non_cm_curves.json'

    entries, scanned, capped = scan_curves(max_degree, min_degree)
    catalog = {"curves": [entry.to_json() for entry in entries]}

    with open(output_file, 'w', encoding='utf-8') as f:
        json.dump(catalog, f, indent=2)

    print(f"✓ Scanned {scanned} curves with {min_degree} <= d <= {max_degree}")
    print(f"  {len(entries)} are not Cohen-Macaulay")
    for name in capped:
        print(f"Warning: E-set of {name} not certified within the level cap")
    print(f"  Output saved to: {output_file}")

    return catalog


if __name__ == '__main__':
    if len(sys.argv) < 2:
        print("Usage:")
        print("  python helpers/scan_curves.py MAX_DEGREE [output.json]")
        sys.exit(1)

    try:
        max_degree = int(sys.argv[1])
    except ValueError:
        print(f"Error: MAX_DEGREE must be an integer, got {sys.argv[1]!r}")
        sys.exit(1)

    output_file = sys.argv[2] if len(sys.argv) > 2 else None
    write_catalog(max_degree, output_file)
