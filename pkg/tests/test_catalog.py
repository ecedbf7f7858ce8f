import json

import pytest

from crmodel import catalog as cat
from crmodel.lie import MapError, PolyMap, same_real_span
from crmodel.scalar import I
from crmodel.suites import _MAP_SAMPLE_PARAMS


def test_manifest_lists_every_entry():
    data = json.loads(cat.manifest())
    assert data["schema"] == "crmodel.catalog/1"
    names = {e["name"] for e in data["entries"]}
    assert set(cat.ALGEBRA_NAMES) <= names
    assert set(cat.HYPERSURFACE_NAMES) <= names
    assert set(cat.MAP_NAMES) <= names
    assert cat.manifest() == cat.manifest()


@pytest.mark.parametrize("name", cat.HYPERSURFACE_NAMES)
def test_every_hypersurface_builds(name):
    M = cat.make_hypersurface(name)
    assert M.rhos


@pytest.mark.parametrize("name", cat.MAP_NAMES)
def test_every_map_builds_with_verified_inverse(name):
    F = cat.make_map(name, **_MAP_SAMPLE_PARAMS.get(name, {}))
    assert F.inverse is None or F.verified


def test_unknown_names():
    with pytest.raises(cat.CatalogError):
        cat.make_algebra("nope")
    with pytest.raises(cat.CatalogError):
        cat.make_hypersurface("nope")
    with pytest.raises(cat.CatalogError):
        cat.make_map("nope")


def test_flip_is_involution():
    F = cat.make_map("flip")
    assert F.then(F).forward == cat.make_map("identity_ambient").forward


def test_a_family_labels_and_special_values():
    assert cat.make_algebra("A", s=1).name == "A(1)"
    assert cat.make_algebra("A").name == "A(s)"
    assert cat.make_algebra("A", s=1, n=2).name == "A(1)[n=2]"
    assert same_real_span(cat.make_algebra("A", s=0).fields, cat.make_algebra("A0").fields)
    F = cat.make_map("a_i_to_g")
    from crmodel.lie import pushforward
    assert same_real_span([pushforward(F, X) for X in cat.make_algebra("A", s=I).fields],
                          cat.make_algebra("g").fields)


def test_specialize_formal_parameter():
    M = cat.make_hypersurface("S")
    assert "gamma" in M.params
    assert cat.make_hypersurface("S", gamma=1).params == ()


def test_map_with_wrong_inverse_raises():
    F = cat.make_map("flip")
    with pytest.raises(MapError):
        PolyMap(F.table, F.src, F.dst, F.forward, [p.scale(2) for p in F.forward])
