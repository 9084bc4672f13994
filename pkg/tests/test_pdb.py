import http.server
import os
import threading

import numpy as np
import pytest

from robustph.exceptions import DataError, InputError, NetworkError, ParseError
from robustph.pdb import PDB_BASE_URL_ENV, fetch_structure, parse_pdb_atoms, parse_pdb_heavy_atoms


def atom(serial, name, res, chain, resseq, x, y, z, elem, rec="ATOM  ", altloc=" ", occ=1.0):
    name = f" {name:<3}" if len(name) < 4 else name
    return (
        f"{rec}{serial:5d} {name}{altloc}{res:>3} {chain}{resseq:4d}    "
        f"{x:8.3f}{y:8.3f}{z:8.3f}{occ:6.2f}{20.0:6.2f}          {elem:>2}"
    )


THREE = "\n".join(
    [
        "HEADER    TEST",
        atom(1, "N", "ALA", "A", 1, 11.104, 6.134, -6.504, "N"),
        atom(2, "CA", "ALA", "A", 1, 11.639, 6.071, -5.147, "C"),
        atom(3, "C", "ALA", "A", 1, 13.099, 5.697, -5.191, "C"),
        "END",
    ]
)


def test_fixed_columns():
    X = parse_pdb_heavy_atoms(THREE)
    assert X.tolist() == [[11.104, 6.134, -6.504], [11.639, 6.071, -5.147], [13.099, 5.697, -5.191]]
    atoms = parse_pdb_atoms(THREE)
    assert [a.element for a in atoms] == ["N", "C", "C"]
    assert atoms[1].name == "CA" and atoms[1].residue == "ALA1" and atoms[1].serial == 2


def test_filters():
    text = "\n".join(
        [
            atom(1, "N", "ALA", "A", 1, 0, 0, 0, "N"),
            atom(2, "H", "ALA", "A", 1, 1, 0, 0, "H"),
            atom(3, "D1", "ALA", "A", 1, 2, 0, 0, "D"),
            atom(4, "CA", "ALA", "B", 1, 3, 0, 0, "C"),
            atom(5, "O", "HOH", "A", 100, 4, 0, 0, "O", rec="HETATM"),
            atom(6, "C1", "LIG", "A", 200, 5, 0, 0, "C", rec="HETATM"),
            atom(7, "CB", "ALA", "A", 1, 6, 0, 0, "C"),
        ]
    )
    assert parse_pdb_heavy_atoms(text).tolist() == [[0, 0, 0], [6, 0, 0]]
    assert parse_pdb_heavy_atoms(text, chain="B").tolist() == [[3, 0, 0]]


def test_only_waters_is_empty():
    text = "\n".join(atom(i, "O", "HOH", "A", i, i, 0, 0, "O", rec="HETATM") for i in range(1, 4))
    with pytest.raises(InputError):
        parse_pdb_heavy_atoms(text)


def test_element_fallback():
    line = atom(1, "CA", "ALA", "A", 1, 1, 2, 3, "  ")[:76]
    atoms = parse_pdb_atoms(line)
    assert atoms[0].element == "C"
    hline = atom(2, "HB2", "ALA", "A", 1, 1, 2, 3, "  ")
    assert parse_pdb_atoms(hline)[0].element == "H"
    assert len(parse_pdb_heavy_atoms(line + "\n" + hline)) == 1


def test_altloc_and_occupancy_do_not_shift_columns():
    text = "\n".join(
        [
            atom(1, "CA", "SER", "A", 5, 1.5, 2.5, 3.5, "C", altloc="A", occ=0.6),
            atom(2, "CA", "SER", "A", 5, 1.7, 2.7, 3.7, "C", altloc="B", occ=0.4),
            atom(3, "CB", "SER", "A", 5, 9.0, 9.0, 9.0, "C", occ=0.99),
        ]
    )
    assert parse_pdb_heavy_atoms(text).tolist() == [[1.5, 2.5, 3.5], [9.0, 9.0, 9.0]]
    assert len(parse_pdb_heavy_atoms(text, altloc="all")) == 3


def test_first_model_only():
    m1 = atom(1, "N", "ALA", "A", 1, 0, 0, 0, "N")
    m2 = atom(1, "N", "ALA", "A", 1, 5, 5, 5, "N")
    text = "\n".join(["MODEL        1", m1, "ENDMDL", "MODEL        2", m2, "ENDMDL"])
    assert parse_pdb_heavy_atoms(text).tolist() == [[0, 0, 0]]


def test_parse_errors_carry_line_number():
    bad = atom(2, "CA", "ALA", "A", 1, 0, 0, 0, "C")
    bad = bad[:30] + "   x.xxx" + bad[38:]
    with pytest.raises(ParseError) as err:
        parse_pdb_atoms(THREE.splitlines()[1] + "\n" + bad)
    assert err.value.lineno == 2
    with pytest.raises(ParseError):
        parse_pdb_atoms("ATOM      1  N   ALA A   1      11.1")


class _Handler(http.server.BaseHTTPRequestHandler):
    routes = {}

    def do_GET(self):
        status, body = self.routes.get(self.path, (404, b"missing"))
        self.send_response(status)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def server():
    httpd = http.server.HTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_port}", _Handler.routes
    httpd.shutdown()
    _Handler.routes.clear()


def test_fetch_ok(server, tmp_path, monkeypatch):
    base, routes = server
    routes["/1ABC.pdb"] = (200, THREE.encode())
    monkeypatch.setenv(PDB_BASE_URL_ENV, base)
    dest = tmp_path / "1abc.pdb"
    fetch_structure("1abc", dest)
    assert len(parse_pdb_heavy_atoms(dest.read_text())) == 3


def test_fetch_failures(server, tmp_path):
    base, routes = server
    routes["/2XYZ.pdb"] = (200, b"HEADER nothing here\n")
    dest = tmp_path / "out.pdb"
    with pytest.raises(DataError):
        fetch_structure("2XYZ", dest, base_url=base)
    with pytest.raises(NetworkError):
        fetch_structure("3XYZ", dest, base_url=base)
    with pytest.raises(NetworkError):
        fetch_structure("4XYZ", dest, base_url="http://127.0.0.1:9", timeout=2)
    assert os.listdir(tmp_path) == []


def test_fetch_validates_id(tmp_path):
    for bad in ("XY", "ABCDE", "ab!c", 1234):
        with pytest.raises(InputError):
            fetch_structure(bad, tmp_path / "x.pdb", base_url="http://127.0.0.1:9")
