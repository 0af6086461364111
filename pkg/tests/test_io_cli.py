import json
import math

import numpy as np
import pytest

from patchwork import cli, formats
from patchwork.errors import ParseError, PatchworkError
from patchwork.geometry import ChairSource, PeriodicSource, Pattern, make_grid
from patchwork.groups import (Homothety, Piecewise, QPPair, Rigid, Translation,
                              IDENTITY)
from patchwork.ramsey import Coloring, brown_search
from patchwork.recurrence import bt_search, lw_search


class TestCanonicalJSON:
    def test_sorted_keys_and_compact(self):
        assert formats.dumps_canonical({"b": 0, "a": [1, 0.3]}) == '{"a":[1,0.3],"b":0}'

    def test_negative_zero_normalized(self):
        assert formats.dumps_canonical(-0.0) == "0"
        assert formats.dumps_canonical([-0.0, 0.0]) == "[0,0]"

    def test_twelve_significant_digits(self):
        assert formats.dumps_canonical(math.pi) == "3.14159265359"

    def test_numpy_values(self):
        assert formats.dumps_canonical(np.float64(0.5)) == "0.5"
        assert formats.dumps_canonical(np.array([1, 2])) == "[1,2]"

    def test_nonfinite_rejected(self):
        with pytest.raises(PatchworkError):
            formats.dumps_canonical(math.inf)

    def test_deterministic(self):
        doc = {"x": [0.1 + 0.2, -0.0], "a": {"c": 1, "b": True}}
        assert formats.dumps_canonical(doc) == formats.dumps_canonical(json.loads(
            formats.dumps_canonical(doc)))


class TestTilingIO:
    def test_periodic_round_trip(self, grid):
        text = formats.dumps_canonical(formats.tiling_to_json(grid))
        back = formats.parse_tiling(text)
        assert isinstance(back, PeriodicSource)
        assert back.window(2.0).key_set() == grid.window(2.0).key_set()

    def test_substitution_round_trip(self, chair5):
        text = formats.dumps_canonical(formats.tiling_to_json(chair5))
        back = formats.parse_tiling(text)
        assert isinstance(back, ChairSource) and back.levels == 5
        assert back.window(3.0).key_set() == chair5.window(3.0).key_set()

    def test_explicit_round_trip(self, grid):
        doc = {"dimension": 2, "kind": "explicit",
               "tiles": [formats.tile_to_json(t) for t in grid.window(2.0)]}
        back = formats.parse_tiling(formats.dumps_canonical(doc))
        assert len(back.patch) == len(grid.window(2.0))

    def test_missing_dimension_names_field(self):
        with pytest.raises(ParseError, match="dimension"):
            formats.parse_tiling('{"kind":"periodic"}')

    def test_wrong_dimension(self):
        with pytest.raises(ParseError, match="dimension 2"):
            formats.parse_tiling('{"dimension":3,"kind":"periodic"}')

    def test_unknown_kind(self):
        with pytest.raises(ParseError, match="kind"):
            formats.parse_tiling('{"dimension":2,"kind":"voronoi"}')

    def test_tile_missing_outer(self):
        doc = '{"dimension":2,"kind":"explicit","tiles":[{"holes":[]}]}'
        with pytest.raises(ParseError, match="outer"):
            formats.parse_tiling(doc)

    def test_invalid_json_reports_line(self):
        with pytest.raises(ParseError, match="invalid JSON"):
            formats.parse_tiling("{not json")


class TestPatternColoringIO:
    def test_pattern_round_trip(self):
        p = Pattern([(0.0, 0.0), (1.0, 2.0)])
        back = formats.parse_pattern(formats.dumps_canonical(formats.pattern_to_json(p)))
        assert back.points == p.points

    def test_pattern_missing_points(self):
        with pytest.raises(ParseError, match="points"):
            formats.parse_pattern("{}")

    def test_coloring_round_trip(self):
        c = Coloring.from_fn((4, 3), lambda x, y: (x + y) % 2)
        back = formats.parse_coloring(formats.dumps_canonical(formats.coloring_to_json(c)))
        assert back.shape == c.shape and np.array_equal(back.colors, c.colors)

    def test_coloring_bad_shape(self):
        with pytest.raises(ParseError):
            formats.parse_coloring('{"dim":2,"shape":[2,2],"colors":[0,1,0]}')


class TestElementIO:
    @pytest.mark.parametrize("g", [
        Translation((0.25, -1.0)),
        Rigid(0.3, (1.0, 2.0)),
        Homothety(1.5, (0.0, 0.5)),
        QPPair((0.1, 0.0), (0.0, 0.05)),
        Piecewise(((0, Translation((1.0, 0.0))), (1, IDENTITY)), "translation"),
    ])
    def test_round_trip(self, g):
        back = formats.parse_element(formats.dumps_canonical(formats.element_to_json(g)))
        assert back == g

    def test_unknown_kind(self):
        with pytest.raises(ParseError, match="kind"):
            formats.parse_element('{"kind":"shear","v":[0,0]}')


class TestCertificateIO:
    def test_brown_round_trip(self):
        c = Coloring.from_fn((30,), lambda x: x % 2)
        cert = brown_search(c, Pattern([(0.0,), (1.0,)]), 3, 6)
        back = formats.parse_certificate(formats.emit_certificate(cert))
        assert back == cert

    def test_lw_round_trip(self, grid):
        cert = lw_search(grid, Pattern([(0.0, 0.0), (1.0, 0.0)]), 0.5)
        back = formats.parse_certificate(formats.emit_certificate(cert))
        assert back.k == cert.k and back.u == cert.u and back.gs == cert.gs
        assert back.y_prime.key_set() == cert.y_prime.key_set()

    def test_bt_round_trip(self, grid):
        cert = bt_search(grid, Pattern([(1.0, 0.0), (0.0, 1.0)]), 0.5,
                         [1.0, math.sqrt(2.0)])
        text = formats.emit_certificate(cert)
        back = formats.parse_certificate(text)
        assert back.q == cert.q
        assert formats.emit_certificate(back) == text

    def test_unknown_type(self):
        with pytest.raises(ParseError, match="type"):
            formats.parse_certificate('{"type":"magic"}')


@pytest.fixture()
def grid_file(tmp_path, grid):
    p = tmp_path / "grid.json"
    p.write_text(formats.dumps_canonical(formats.tiling_to_json(grid)))
    return str(p)


@pytest.fixture()
def parity_file(tmp_path):
    c = Coloring.from_fn((30,), lambda x: x % 2)
    p = tmp_path / "parity.json"
    p.write_text(formats.dumps_canonical(formats.coloring_to_json(c)))
    return str(p)


@pytest.fixture()
def pair_pattern_file(tmp_path):
    p = tmp_path / "pair.json"
    p.write_text('{"points":[[0],[1]]}')
    return str(p)


class TestCLI:
    def test_distance_self_is_zero(self, grid_file, capsys):
        rc = cli.main(["distance", "--x", grid_file, "--y", grid_file])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["lo"] == 0 and doc["hi"] == 0

    def test_delta_example(self, grid_file, capsys):
        rc = cli.main(["delta", "--tiling", grid_file, "--r", "1.0",
                       "--action", "rigid"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["hi"] == pytest.approx(1 + 2 * math.sqrt(2.0), abs=1e-9)

    def test_brown_found(self, parity_file, pair_pattern_file, capsys):
        rc = cli.main(["brown", "--coloring", parity_file,
                       "--pattern", pair_pattern_file, "--k", "3"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["q"] == 1 and doc["t"] == [0] and doc["vs"] == [[0], [1]]

    def test_brown_not_found_exits_2(self, pair_pattern_file, tmp_path, capsys):
        c = Coloring.from_fn((4,), lambda x: x % 2)
        f = tmp_path / "small.json"
        f.write_text(formats.dumps_canonical(formats.coloring_to_json(c)))
        rc = cli.main(["brown", "--coloring", str(f),
                       "--pattern", pair_pattern_file, "--k", "50", "--q-max", "0"])
        assert rc == 2

    def test_gallai(self, parity_file, pair_pattern_file, capsys):
        rc = cli.main(["gallai", "--coloring", parity_file,
                       "--pattern", pair_pattern_file])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["k"] == 2 and doc["t"] == [0]

    def test_malformed_input_exits_1(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text("{broken")
        rc = cli.main(["distance", "--x", str(f), "--y", str(f)])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exits_1(self, grid_file, capsys):
        rc = cli.main(["distance", "--x", grid_file, "--y", "/nonexistent.json"])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_topo_brown(self, capsys):
        rc = cli.main(["topo-brown", "--eps", "0.2", "--k-set", "1,2,3"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["type"] == "topo-brown" and len(doc["witnesses"]) == 3

    def test_bt_deterministic_bytes(self, grid_file, tmp_path):
        pat = tmp_path / "pat.json"
        pat.write_text('{"points":[[1,0],[0,1]]}')
        outs = [tmp_path / "a.json", tmp_path / "b.json"]
        for out in outs:
            rc = cli.main(["bt", "--tiling", grid_file, "--pattern", str(pat),
                           "--eps", "0.5", "--lambdas", "1,sqrt2,2.5",
                           "--out", str(out)])
            assert rc == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()

    def test_render_deterministic_and_complete(self, grid_file, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        for out in (a, b):
            rc = cli.main(["render", "--tiling", grid_file, "--radius", "3",
                           "--out", str(out)])
            assert rc == 0
        data = a.read_text()
        assert a.read_bytes() == b.read_bytes()
        assert data.startswith("<svg ")
        assert data.count("<path ") == 36  # every cell of the radius-3 window

    def test_check_axioms(self, capsys):
        rc = cli.main(["check-axioms", "--theta", "affine", "--action", "rigid",
                       "--samples", "20"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["axioms_ok"] and doc["g5_ok"]

    def test_local_iso(self, grid_file, tmp_path, capsys):
        cell = tmp_path / "cell.json"
        cell.write_text('{"dimension":2,"kind":"explicit","tiles":'
                        '[{"outer":[[0,0],[1,0],[1,1],[0,1]],"class":"cell"}]}')
        rc = cli.main(["local-iso", "--tiling", grid_file, "--patch", str(cell),
                       "--window", "12"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        # output is canonical JSON with 12 significant digits
        assert doc["r"] == pytest.approx(math.sqrt(2.0), abs=1e-10)

    def test_returns(self, grid_file, capsys):
        rc = cli.main(["returns", "--tiling", grid_file, "--delta", "0.3",
                       "--window", "1.5"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["relatively_dense_in_window"]
