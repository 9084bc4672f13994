"""Heavy-atom point clouds from PDB files, and optional download."""
from __future__ import annotations

import os
import re
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, InputError, NetworkError, ParseError

__all__ = [
    "AtomRecord",
    "PDB_BASE_URL_ENV",
    "parse_pdb_atoms",
    "parse_pdb_heavy_atoms",
    "fetch_structure",
]

PDB_BASE_URL_ENV = "ROBUSTPH_PDB_BASE_URL"
DEFAULT_BASE_URL = "https://files.rcsb.org/download"
_ID_RE = re.compile(r"^[0-9][A-Za-z0-9]{3}$")


@dataclass(frozen=True)
class AtomRecord:
    serial: int
    name: str
    element: str
    chain: str
    residue: str
    coords: tuple


def _element(line):
    elem = line[76:78].strip() if len(line) >= 78 else ""
    if elem:
        return elem.upper()
    for ch in line[12:16]:
        if ch.isalpha():
            return ch.upper()
    return ""


def parse_pdb_atoms(text, chain="A", altloc="first"):
    """ATOM records of one chain from the first model of a PDB file.

    HETATM records (waters, ligands) are never returned. With
    ``altloc="first"`` only the first alternate location of each atom is
    kept; ``altloc="all"`` keeps every record.

    Raises
    ------
    ParseError
        On an ATOM line whose fixed columns cannot be read.
    """
    atoms = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        rec = line[:6]
        if rec == "ENDMDL":
            break
        if rec != "ATOM  ":
            continue
        if len(line) < 54:
            raise ParseError("ATOM record shorter than 54 columns", lineno)
        if line[21] != chain:
            continue
        try:
            serial = int(line[6:11])
            xyz = (float(line[30:38]), float(line[38:46]), float(line[46:54]))
        except ValueError:
            raise ParseError("unreadable serial or coordinate field", lineno) from None
        if not all(np.isfinite(xyz)):
            raise ParseError("non-finite coordinate", lineno)
        name = line[12:16].strip()
        residue = f"{line[17:20].strip()}{line[22:26].strip()}{line[26].strip()}"
        if altloc == "first":
            key = (residue, name)
            if key in seen:
                continue
            seen.add(key)
        element = _element(line)
        if not element:
            raise ParseError("no element symbol", lineno)
        atoms.append(AtomRecord(serial, name, element, chain, residue, xyz))
    return atoms


def parse_pdb_heavy_atoms(text, chain="A", altloc="first"):
    """Coordinates (in angstrom) of the non-hydrogen ATOM records of a chain.

    Returns
    -------
    ndarray of shape (n_atoms, 3)
        In file order.
    """
    atoms = [a for a in parse_pdb_atoms(text, chain, altloc) if a.element not in ("H", "D")]
    if not atoms:
        raise InputError(f"no heavy ATOM records for chain {chain!r}")
    return np.array([a.coords for a in atoms], dtype=np.float64)


def fetch_structure(pdb_id, destination, *, timeout=30.0, base_url=None):
    """Download ``<pdb_id>.pdb`` to ``destination``.

    The archive base URL comes from ``base_url``, else the
    ``ROBUSTPH_PDB_BASE_URL`` environment variable, else the RCSB download
    service. The file is written atomically: on failure nothing is left
    at ``destination``.
    """
    if not isinstance(pdb_id, str) or not _ID_RE.match(pdb_id):
        raise InputError(f"malformed PDB id {pdb_id!r}")
    base = base_url or os.environ.get(PDB_BASE_URL_ENV, DEFAULT_BASE_URL)
    url = f"{base.rstrip('/')}/{pdb_id.upper()}.pdb"
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = resp.read()
    except urllib.error.HTTPError as exc:
        raise NetworkError(f"HTTP {exc.code} fetching {url}") from exc
    except (urllib.error.URLError, OSError) as exc:
        raise NetworkError(f"could not fetch {url}: {exc}") from exc
    if not payload or b"\nATOM  " not in b"\n" + payload:
        raise DataError(f"{url} returned no ATOM records")
    destination = os.fspath(destination)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(destination)), suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, destination)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return destination
