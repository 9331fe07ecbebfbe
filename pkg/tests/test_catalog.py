"""Test the curve catalog and the data files shipped with it"""
import json
import pytest
import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from catalog import CurveCatalog
from curve_data import Exponent
from errors import CurveError, GcdNotOneError
from semigroup import e_set

DATA_DIR = Path(__file__).parent.parent / 'data'


@pytest.fixture
def catalog():
    return CurveCatalog()


class TestCatalogFile:
    """Structure of data/curves.json"""

    def test_file_structure(self):
        with open(DATA_DIR / 'curves.json') as f:
            data = json.load(f)

        assert 'curves' in data
        for item in data['curves']:
            assert isinstance(item['name'], str)
            assert all(isinstance(k, int) for k in item['k'])
            assert isinstance(item['d'], int)
            for alpha in item.get('E', []):
                assert len(alpha) == 2

    def test_recorded_e_sets_are_correct(self, catalog):
        for name in catalog.names():
            entry = catalog.get(name)
            computed = e_set(entry.curve)
            if entry.partial:
                assert set(entry.e_set) <= set(computed), name
            else:
                assert entry.e_set == computed, name

    def test_known_entries(self, catalog):
        assert catalog.get('running').e_set == [Exponent(1, 2)]
        fourteen = catalog.get('fourteen')
        assert not fourteen.partial
        assert len(fourteen.e_set) == 22
        assert (fourteen.e_set[0], fourteen.e_set[-1]) == (Exponent(1, 12), Exponent(5, 64))
        assert catalog.get('conic').curve.d == 2
        assert catalog.get('missing') is None


class TestCatalogInjection:
    """Catalog data passed in directly"""

    def test_injected_data(self):
        catalog = CurveCatalog(curves_data={'curves': [{'name': 'line', 'k': [1], 'd': 3}]})
        assert catalog.names() == ['line']
        assert catalog.get('line').e_set == []

    def test_duplicate_names(self):
        data = {'curves': [{'name': 'a', 'k': [1], 'd': 2}, {'name': 'a', 'k': [1], 'd': 3}]}
        with pytest.raises(CurveError, match="Duplicate"):
            CurveCatalog(curves_data=data)

    def test_invalid_curve(self):
        with pytest.raises(GcdNotOneError):
            CurveCatalog(curves_data={'curves': [{'name': 'bad', 'k': [2], 'd': 4}]})

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            CurveCatalog(curves_file=str(tmp_path / 'none.json'))

    def test_to_json(self):
        data = {'curves': [{'name': 'z', 'k': [6, 7, 13], 'd': 14, 'E': [[2, 18]], 'partial': True},
                           {'name': 'a', 'k': [1], 'd': 2}]}
        dumped = CurveCatalog(curves_data=data).to_json()
        assert [item['name'] for item in dumped['curves']] == ['a', 'z']
        assert dumped['curves'][1] == {'name': 'z', 'k': [6, 7, 13], 'd': 14, 'E': [[2, 18]], 'partial': True}
        assert 'partial' not in dumped['curves'][0]


class TestSettingsFile:
    """Structure of data/settings.json"""

    def test_settings_values(self):
        with open(DATA_DIR / 'settings.json') as f:
            data = json.load(f)

        assert data['eps_root'] == 1e-12
        assert data['delta_sep'] == 1e-6
        assert data['eps_check'] == 1e-8
        assert data['rank_threshold'] == 1e-8
        assert data['quad_nodes'] == 64
        assert all(value > 0 for value in data.values())
