"""Bundled data assets: loading, hashing and verification."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .groupcore import Group, parse_group
from .modrep import GModule, meataxe, parse_module
from .presentations import Presentation, evaluate_in_group, parse_presentation, verify_presentation

MANIFEST = "manifest.json"


class AssetError(RuntimeError):
    """Missing or corrupted asset (maps to exit code 2)."""


def asset_dir() -> Path:
    env = os.environ.get("GRPX_ASSET_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "assets"


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class Bundle:
    root: Path
    manifest: dict

    @classmethod
    def open(cls, root: Path | str | None = None) -> "Bundle":
        root = Path(root) if root is not None else asset_dir()
        path = root / MANIFEST
        if not path.exists():
            raise AssetError(f"no manifest in {root}")
        return cls(root, json.loads(path.read_text()))

    # entries
    @property
    def assets(self) -> dict:
        return {a["name"]: a for a in self.manifest["assets"]}

    def entry(self, name: str) -> dict:
        try:
            return self.assets[name]
        except KeyError:
            raise AssetError(f"unknown asset {name!r}") from None

    def path(self, fname: str) -> Path:
        return self.root / fname

    def check_hash(self, fname: str):
        want = self.manifest["hashes"].get(fname)
        p = self.path(fname)
        if want is None or not p.exists():
            raise AssetError(f"{fname}: missing from bundle")
        got = sha256(p)
        if got != want:
            raise AssetError(f"{fname}: sha256 {got[:12]} does not match manifest {want[:12]}")

    def hash_failures(self) -> list:
        out = []
        for fname in sorted(self.manifest["hashes"]):
            try:
                self.check_hash(fname)
            except AssetError as e:
                out.append(str(e))
        return out

    def input_hashes(self, name: str) -> dict:
        e = self.entry(name)
        files = list(e.get("files", {}).values())
        if "group" in e and e["group"] != name:
            files += list(self.entry(e["group"]).get("files", {}).values())
        return {f: self.manifest["hashes"][f] for f in sorted(set(files))}

    # loaders (hash-checked)
    def _text(self, name: str, key: str) -> str:
        e = self.entry(name)
        fname = e["files"].get(key)
        if fname is None:
            raise AssetError(f"asset {name!r} has no {key} file")
        self.check_hash(fname)
        return self.path(fname).read_text()

    def presentation(self, name: str) -> Presentation:
        p = parse_presentation(self._text(name, "pres"))
        if not p.name:
            p.name = name
        return p

    def group(self, name: str) -> Group:
        g = parse_group(self._text(name, "grp"))
        g.name = name
        return g

    def module(self, name: str, group: Group | None = None) -> GModule:
        e = self.entry(name)
        g = group if group is not None else self.group(e["group"])
        return parse_module(self._text(name, "mod"), g)


def verify_entry(b: Bundle, name: str, seed: int = 0) -> tuple[bool, str]:
    """Run the executable checks for one asset; (ok, message)."""
    e = b.entry(name)
    kind = e["kind"]
    try:
        if kind == "group":
            g = b.group(name)
            if g.order() != e["order"]:
                return False, f"order {g.order()} != {e['order']}"
            if "pres" in e["files"]:
                p = b.presentation(name)
                sub = None
                if e.get("verify_sub"):
                    sub = [p.word(e["verify_sub"])]
                if not verify_presentation(p, g, sub=sub):
                    return False, "presentation does not verify against the generators"
            return True, f"order {e['order']}"
        if kind == "module":
            g = b.group(e["group"])
            m = b.module(name, g)
            if m.dim != e["dim"]:
                return False, f"dim {m.dim} != {e['dim']}"
            ge = b.entry(e["group"])
            if "pres" in ge["files"]:
                p = b.presentation(e["group"])
                mg = m.image_group()
                for r in p.relators:
                    if not mg.is_identity(evaluate_in_group(r, mg)):
                        return False, f"relator {p.format_word(r)} fails on the module"
            if e.get("irreducible") and not meataxe(m, seed).irreducible:
                return False, "module is reducible"
            return True, f"dim {m.dim}"
        return False, f"unknown asset kind {kind!r}"
    except AssetError:
        raise
    except Exception as exc:
        return False, f"{type(exc).__name__}: {exc}"
