"""Gadget tile library: loading, grammar checks, placement, validation.

The library ships as data (tile-local integer anchor sets with declared
orange/blue/red roles). Tiles are accepted on the strength of machine
checks, not figure fidelity: the validators build small closed instances
around each kind, enumerate every full cover, and assert the declared
semantics (oranges identical in all covers, wire tiles in exactly two
star states, clause acceptance wired to delivering chains, split gating
both outputs on its input).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .geometry import Point, Rect, pt
from .hardness import enumerate_full_covers, propagate_forced
from .packing import Packing
from .reach import Instance

TILE = 12


class GrammarViolation(ValueError):
    pass


@dataclass(frozen=True)
class Gadget:
    kind: str
    variant: str
    features: tuple
    anchors: tuple[tuple[int, int], ...]
    stars: tuple[tuple[int, int], ...]
    oranges: tuple[tuple[tuple[int, int, int, int], tuple[int, int]], ...]
    blues: tuple[tuple[tuple[int, int, int, int], tuple[tuple[int, int], ...]], ...]
    red: dict | None
    ports: tuple[str, ...]

    @property
    def name(self) -> str:
        return f"{self.kind}/{self.variant}"


def _library_text(path: str | Path | None) -> str:
    if path is not None:
        return Path(path).read_text()
    return resources.files("anchorpack").joinpath("data/gadgets.json").read_text()


def load_library(path: str | Path | None = None) -> dict[tuple[str, str], Gadget]:
    doc = json.loads(_library_text(path))
    if doc.get("schema_version") != 1:
        raise ValueError("unsupported gadget library schema version")
    if doc.get("tile_size") != TILE:
        raise ValueError("tile size must be 12")
    out: dict[tuple[str, str], Gadget] = {}
    for g in doc["gadgets"]:
        gadget = Gadget(
            kind=g["kind"],
            variant=g["variant"],
            features=tuple(tuple(f) for f in g.get("features", [])),
            anchors=tuple(tuple(a["pos"]) for a in g["anchors"]),
            stars=tuple(tuple(a["pos"]) for a in g["anchors"] if a.get("star")),
            oranges=tuple((tuple(o["rect"]), tuple(o["anchor"])) for o in g.get("oranges", [])),
            blues=tuple((tuple(b["rect"]), tuple(tuple(o) for o in b.get("options", [])))
                        for b in g.get("blues", [])),
            red=g.get("red"),
            ports=tuple(g.get("ports", [])),
        )
        grammar_check(gadget)
        out[(gadget.kind, gadget.variant)] = gadget
    return out


def grammar_check(g: Gadget):
    """Structural rules for tiles: 12x12 base with optional 1x2 edge features,
    anchors inside the tile, stars among anchors, duplicated anchors only in
    splits, declared squares tiling the base, and stars kept off the growth
    edges of declared oranges except at the one-unit property-2 position."""
    if g.kind not in ("filler", "wire", "turn", "split", "clause"):
        raise GrammarViolation(f"unknown kind {g.kind}")
    for f in g.features:
        side, offset, mode = f
        if side not in ("left", "right", "top", "bottom") or mode not in ("add", "remove"):
            raise GrammarViolation("malformed feature")
        if not 0 <= offset <= TILE - 2:
            raise GrammarViolation("feature must fit a 1x2 slot on a side")
    for (x, y) in g.anchors:
        if not (0 <= x <= TILE and 0 <= y <= TILE):
            raise GrammarViolation(f"anchor {(x, y)} outside the tile")
    counts: dict[tuple[int, int], int] = {}
    for a in g.anchors:
        counts[a] = counts.get(a, 0) + 1
    if any(c > 1 for c in counts.values()) and g.kind != "split":
        raise GrammarViolation("duplicated anchor positions are reserved for splits")
    for s in g.stars:
        if s not in g.anchors:
            raise GrammarViolation("star not among anchors")

    area = 0
    pieces = []
    for rect4, anchor in g.oranges:
        x0, y0, x1, y1 = rect4
        if anchor not in [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]:
            raise GrammarViolation("orange anchor must be a corner of its square")
        if x1 - x0 != y1 - y0:
            raise GrammarViolation("orange must be a square")
        pieces.append(rect4)
        area += (x1 - x0) * (y1 - y0)
    for rect4, options in g.blues:
        x0, y0, x1, y1 = rect4
        if x1 - x0 != y1 - y0:
            raise GrammarViolation("blue must be a square")
        for o in options:
            if tuple(o) not in [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]:
                raise GrammarViolation("blue option must be a corner of its square")
        pieces.append(rect4)
        area += (x1 - x0) * (y1 - y0)
    if g.red is not None:
        x0, y0, x1, y1 = g.red["rect"]
        pieces.append((x0, y0, x1, y1))
        area += (x1 - x0) * (y1 - y0)
    if g.kind != "clause" or g.red is not None:
        if area != TILE * TILE:
            raise GrammarViolation(f"declared squares cover area {area}, want {TILE * TILE}")
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            a, b = pieces[i], pieces[j]
            if max(a[0], b[0]) < min(a[2], b[2]) and max(a[1], b[1]) < min(a[3], b[3]):
                raise GrammarViolation("declared squares overlap")

    # property-2 compatibility: stars on an orange's anchor-opposite edges only
    # at the one-unit offset position
    for (x0, y0, x1, y1), anchor in g.oranges:
        ax, ay = anchor
        ox, oy = x0 + x1 - ax, y0 + y1 - ay  # corner opposite the anchor
        for (sx, sy) in g.stars:
            on_h = sy == oy and min(ox, ax) < sx < max(ox, ax)
            on_v = sx == ox and min(oy, ay) < sy < max(oy, ay)
            if on_h or on_v:
                unit = (abs(sx - ox) == 1 and sy == oy) or (abs(sy - oy) == 1 and sx == ox)
                if not unit:
                    raise GrammarViolation(
                        "star on an orange growth edge away from the unit position")


# ---------------------------------------------------------------------------
# Placement.
# ---------------------------------------------------------------------------

@dataclass
class Placed:
    tiles: dict[tuple[int, int], Gadget]
    instance: Instance
    anchor_tiles: dict[int, tuple[int, int]]
    point_index: dict[tuple[int, int], list[int]]

    def tile_rect(self, col: int, row: int) -> Rect:
        return Rect(pt(col * TILE, row * TILE), pt((col + 1) * TILE, (row + 1) * TILE))

    def local_point(self, col: int, row: int, p: tuple[int, int]) -> tuple[int, int]:
        return (col * TILE + p[0], row * TILE + p[1])


def place_tiles(tiles: dict[tuple[int, int], Gadget], grid: int) -> Placed:
    """Build the integer instance for a full grid x grid tiling."""
    for pos in tiles:
        c, r = pos
        if not (0 <= c < grid and 0 <= r < grid):
            raise ValueError(f"tile {pos} outside the {grid}x{grid} grid")
    if len(tiles) != grid * grid:
        raise ValueError("tiles must partition the container")
    seen: dict[tuple[int, int], int] = {}
    anchors: list[tuple[int, int]] = []
    anchor_tiles: dict[int, tuple[int, int]] = {}
    for (c, r), g in sorted(tiles.items()):
        local_counts: dict[tuple[int, int], int] = {}
        for a in g.anchors:
            local_counts[a] = local_counts.get(a, 0) + 1
        for a, cnt in sorted(local_counts.items()):
            gp = (c * TILE + a[0], r * TILE + a[1])
            have = seen.get(gp, 0)
            for _ in range(max(0, cnt - have)):
                anchors.append(gp)
                anchor_tiles[len(anchors) - 1] = (c, r)
            seen[gp] = max(have, cnt)
    w = grid * TILE
    inst = Instance(Fraction(w), tuple(pt(x, y) for x, y in anchors))
    point_index: dict[tuple[int, int], list[int]] = {}
    for i, a in enumerate(anchors):
        point_index.setdefault(a, []).append(i)
    return Placed(tiles, inst, anchor_tiles, point_index)


class LayoutError(ValueError):
    pass


_FILLER_CORNER = {"default": (12, 12), "tl": (0, 12), "br": (12, 0), "bl": (0, 0)}


def fill_grid(grid: int, structural: dict[tuple[int, int], Gadget],
              lib: dict[tuple[str, str], Gadget]) -> dict[tuple[int, int], Gadget]:
    """Complete a layout with filler tiles so that every interior lattice
    point (multiples of the tile size) carries exactly one anchor.

    Any empty square with side above the tile size strictly contains an
    interior lattice point, so full lattice coverage excludes oversized
    merged squares from every packing. Fillers are oriented (one anchor at
    one of their four corners) to claim the lattice points the structural
    tiles leave open; spare fillers claim container-boundary lattice points.
    """
    declared: set[tuple[int, int]] = set()
    for (c, r), g in structural.items():
        for a in g.anchors:
            declared.add((c * TILE + a[0], r * TILE + a[1]))
    tiles = dict(structural)
    free = sorted(set((c, r) for c in range(grid) for r in range(grid))
                  - set(structural))
    unassigned = set(free)
    assignment: dict[tuple[int, int], str] = {}

    def corner_of(pos, variant):
        off = _FILLER_CORNER[variant]
        return (pos[0] * TILE + off[0], pos[1] * TILE + off[1])

    needed = set()
    for i in range(1, grid):
        for j in range(1, grid):
            p = (i * TILE, j * TILE)
            if p not in declared:
                needed.add(p)

    # Assign every filler one free corner point, covering all needed points.
    corner_opts = {pos: [(corner_of(pos, v), v) for v in ("default", "br", "tl", "bl")
                         if corner_of(pos, v) not in declared]
                   for pos in free}
    adj_fillers: dict[tuple[int, int], list] = {}
    for pos, opts in corner_opts.items():
        for p, v in opts:
            adj_fillers.setdefault(p, []).append((pos, v))

    match_f: dict[tuple[int, int], tuple[int, int]] = {}   # filler -> point
    match_p: dict[tuple[int, int], tuple[int, int]] = {}   # point -> filler

    def saturate_filler(pos, seen):
        for p, _v in corner_opts[pos]:
            if p in seen:
                continue
            seen.add(p)
            if p not in match_p or saturate_filler(match_p[p], seen):
                match_p[p] = pos
                match_f[pos] = p
                return True
        return False

    for pos in free:
        if not saturate_filler(pos, set()):
            raise LayoutError(f"filler at {pos} has no free corner to anchor")

    def cover_point(p, seen):
        for pos, _v in adj_fillers.get(p, []):
            if pos in seen:
                continue
            seen.add(pos)
            q = match_f[pos]
            if q == p:
                return True
            if q not in needed or cover_point(q, seen):
                if match_p.get(q) == pos:
                    del match_p[q]
                match_f[pos] = p
                match_p[p] = pos
                return True
        return False

    for p in sorted(needed):
        if match_p.get(p) is None and not cover_point(p, set()):
            raise LayoutError(f"no filler assignment covers lattice point {p}")

    for pos in free:
        p = match_f[pos]
        variant = next(v for q, v in corner_opts[pos] if q == p)
        assignment[pos] = variant
        unassigned.discard(pos)
        declared.add(p)

    for pos, variant in assignment.items():
        tiles[pos] = lib[("filler", variant)]
    return tiles


# ---------------------------------------------------------------------------
# Cover introspection helpers.
# ---------------------------------------------------------------------------

def consumed_points(placed: Placed, cover: Packing) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for sq in cover.squares:
        if sq.side > 0:
            p = placed.instance.anchors[sq.anchor_index]
            key = (int(p.x), int(p.y))
            out[key] = out.get(key, 0) + 1
    return out


def square_map(placed: Placed, cover: Packing) -> dict[tuple, tuple[int, int]]:
    """rect (as int 4-tuple) -> global anchor point, for positive squares."""
    out = {}
    for sq in cover.squares:
        if sq.side > 0:
            r = sq.rect_for(placed.instance)
            key = (int(r.lo.x), int(r.lo.y), int(r.hi.x), int(r.hi.y))
            p = placed.instance.anchors[sq.anchor_index]
            out[key] = (int(p.x), int(p.y))
    return out


def oranges_hold(placed: Placed, cover: Packing) -> bool:
    """Every declared orange square appears verbatim in the cover.

    Position-forced at region level: the anchor is normally the declared one,
    but a square may legally borrow a free star sitting on one of its corners
    (the declared anchor then carries a zero square), so anchors may differ.
    """
    smap = square_map(placed, cover)
    for (c, r), g in placed.tiles.items():
        for (x0, y0, x1, y1), _anchor in g.oranges:
            key = (c * TILE + x0, r * TILE + y0, c * TILE + x1, r * TILE + y1)
            if key not in smap:
                return False
    return True


# ---------------------------------------------------------------------------
# Per-kind validation fixtures.
# ---------------------------------------------------------------------------

@dataclass
class GadgetReport:
    gadget: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _wire_slot_anchor(placed: Placed, cover: Packing, col: int, row: int):
    key = (col * TILE, row * TILE, (col + 1) * TILE, (row + 1) * TILE)
    return square_map(placed, cover).get(key)


def _enumerate(placed: Placed, budget=3_000_000):
    return enumerate_full_covers(placed.instance, budget=budget)


def _validate_filler(lib) -> GadgetReport:
    rep = GadgetReport("filler/default")
    tiles = fill_grid(2, {}, lib)
    placed = place_tiles(tiles, 2)
    fs = propagate_forced(placed.instance)
    rep.checks["propagation_tiles_fully"] = fs.status == "fully-tiled"
    rep.checks["forced_are_declared_oranges"] = len(fs.forced) == 4 and all(
        sq.side == TILE for sq, _ in fs.forced)
    covers = _enumerate(placed)
    rep.checks["unique_cover"] = len(covers) == 1
    rep.checks["oranges_hold"] = all(oranges_hold(placed, c) for c in covers)
    return rep


def _validate_wire(lib, variant: str) -> GadgetReport:
    rep = GadgetReport(f"wire/{variant}")
    g = lib[("wire", variant)]
    grid = 3
    if variant == "v":
        run = {(1, r): g for r in range(3)}
        slots = [(1, r) for r in range(3)]
    else:
        run = {(c, 1): g for c in range(3)}
        slots = [(c, 1) for c in range(3)]
    placed = place_tiles(fill_grid(grid, run, lib), grid)
    covers = _enumerate(placed)
    rep.details["covers"] = len(covers)
    rep.checks["covers_exist"] = len(covers) >= 2
    rep.checks["oranges_hold"] = all(oranges_hold(placed, c) for c in covers)
    state_sets = {pos: set() for pos in slots}
    ok_states = True
    for cover in covers:
        for (c, r) in slots:
            got = _wire_slot_anchor(placed, cover, c, r)
            if got is None:
                ok_states = False
                continue
            stars_global = {placed.local_point(c, r, s) for s in g.stars}
            if got not in stars_global:
                ok_states = False
            state_sets[(c, r)].add(got)
    rep.checks["slots_anchored_at_own_stars"] = ok_states
    rep.checks["exactly_two_states_per_tile"] = all(len(v) == 2 for v in state_sets.values())
    return rep


def _validate_turn(lib, variant: str) -> GadgetReport:
    rep = GadgetReport(f"turn/{variant}")
    g = lib[("turn", variant)]
    grid = 4
    wire_v = lib[("wire", "v")]
    h_top = lib[("wire", "h_top")]
    h_low = lib[("wire", "h_low")]
    if variant == "up_right":
        run = {(1, 0): wire_v, (1, 1): wire_v, (1, 2): g, (2, 2): h_top, (3, 2): h_top}
        near, far = (24, 0), (48, 36)
    elif variant == "up_left":
        run = {(2, 0): wire_v, (2, 1): wire_v, (2, 2): g, (1, 2): h_top, (0, 2): h_top}
        near, far = (36, 0), (0, 36)
    elif variant == "down_right":
        run = {(1, 3): wire_v, (1, 2): wire_v, (1, 1): g, (2, 1): h_low, (3, 1): h_low}
        near, far = (24, 48), (48, 12)
    elif variant == "down_left":
        run = {(2, 3): wire_v, (2, 2): wire_v, (2, 1): g, (1, 1): h_low, (0, 1): h_low}
        near, far = (36, 48), (0, 12)
    else:
        raise ValueError(variant)
    placed = place_tiles(fill_grid(grid, run, lib), grid)
    covers = _enumerate(placed)
    rep.details["covers"] = len(covers)
    rep.checks["covers_exist"] = len(covers) >= 2
    rep.checks["oranges_hold"] = all(oranges_hold(placed, c) for c in covers)
    free_pairs = set()
    chain_ok = True
    for cover in covers:
        used = consumed_points(placed, cover)
        free_pairs.add((near not in used, far not in used))
        if near not in used and far not in used:
            chain_ok = False  # one free star per chain, never two
    rep.checks["single_free_star"] = chain_ok
    rep.checks["relay_reaches_both_ends"] = (True, False) in free_pairs and (
        False, True) in free_pairs
    return rep


def _validate_clause(lib, variant: str) -> GadgetReport:
    rep = GadgetReport(f"clause/{variant}")
    g = lib[("clause", variant)]
    wire_v = lib[("wire", "v")]
    grid = 5
    if variant == "pos":
        h = lib[("wire", "h_top")]
        run = {(2, 2): g, (2, 0): wire_v, (2, 1): wire_v,
               (0, 2): h, (1, 2): h, (3, 2): h, (4, 2): h}
        ports = {"bottom": (36, 24), "left": (24, 36), "right": (36, 36)}
        terminals = {"bottom": (36, 24), "left": (24, 36), "right": (36, 36)}
    else:
        h = lib[("wire", "h_low")]
        run = {(2, 2): g, (2, 4): wire_v, (2, 3): wire_v,
               (0, 2): h, (1, 2): h, (3, 2): h, (4, 2): h}
        ports = {"top": (36, 36), "left": (24, 24), "right": (36, 24)}
        terminals = dict(ports)
    placed = place_tiles(fill_grid(grid, run, lib), grid)
    covers = _enumerate(placed)
    rep.details["covers"] = len(covers)
    rep.checks["covers_exist"] = bool(covers)
    rep.checks["oranges_hold"] = all(oranges_hold(placed, c) for c in covers)
    red_keys = set(ports.values())
    combos = set()
    red_ok = True
    for cover in covers:
        smap = square_map(placed, cover)
        red_rect = (24, 24, 36, 36)
        red_anchor = smap.get(red_rect)
        if red_anchor not in red_keys:
            red_ok = False
            continue
        used = consumed_points(placed, cover)
        state = tuple(sorted(p for p, q in terminals.items()
                             if used.get(q, 0) == 0 or q == red_anchor))
        combos.add(state)
    rep.checks["red_anchored_at_a_port"] = red_ok
    rep.checks["every_satisfying_combo_reachable"] = len(combos) == 7
    rep.details["combos"] = sorted(combos)
    return rep


def _validate_split(lib) -> GadgetReport:
    rep = GadgetReport("split/up_right")
    grid = 5
    wire_v = lib[("wire", "v")]
    h_top = lib[("wire", "h_top")]
    run = {
        (1, 0): wire_v,
        (1, 1): lib[("split", "up_right")],
        (1, 2): lib[("turn", "split_adapter_up")],
        (1, 3): wire_v,
        (2, 1): lib[("turn", "split_adapter_right")],
        (3, 1): h_top,
    }
    placed = place_tiles(fill_grid(grid, run, lib), grid)
    covers = _enumerate(placed)
    rep.details["covers"] = len(covers)
    rep.checks["covers_exist"] = bool(covers)
    rep.checks["oranges_hold"] = all(oranges_hold(placed, c) for c in covers)
    in_point = (24, 12)     # shared star between the in-wire and the split
    up_far = (24, 48)       # top star of the up stub
    right_far = (48, 24)    # far star of the right stub
    sound = True
    both_pos = False
    for cover in covers:
        used = consumed_points(placed, cover)
        smap = square_map(placed, cover)
        in_neg = smap.get((12, 0, 24, 12)) == in_point  # in-wire consumed the baton
        up_pos = up_far not in used
        right_pos = right_far not in used
        if (up_pos or right_pos) and in_neg:
            sound = False
        if up_pos and right_pos and not in_neg:
            both_pos = True
    rep.checks["outputs_positive_only_with_input"] = sound
    rep.checks["both_outputs_positive_reachable"] = both_pos
    return rep


def validate_gadget(lib: dict, kind: str, variant: str | None = None) -> GadgetReport:
    """Build the kind's closed fixture, enumerate covers, check semantics."""
    if kind == "filler":
        return _validate_filler(lib)
    if kind == "wire":
        return _validate_wire(lib, variant or "v")
    if kind == "turn":
        if variant in ("split_adapter_up", "split_adapter_right"):
            return _validate_split(lib)
        return _validate_turn(lib, variant or "up_right")
    if kind == "clause":
        return _validate_clause(lib, variant or "pos")
    if kind == "split":
        return _validate_split(lib)
    raise ValueError(kind)


def validate_library(lib: dict | None = None) -> list[GadgetReport]:
    if lib is None:
        lib = load_library()
    reports = []
    seen = set()
    for (kind, variant) in lib:
        key = ("split" if "adapter" in variant else kind,
               variant if kind in ("wire", "turn", "clause") and "adapter" not in variant else None)
        if key in seen:
            continue
        seen.add(key)
        reports.append(validate_gadget(lib, kind, variant))
    return reports
