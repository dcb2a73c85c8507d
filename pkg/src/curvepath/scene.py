"""Half-edge scenes: the combinatorial substrate for curves on surfaces.

A scene is a rotation system on a compact oriented surface with boundary.
Every edge is split into two opposite half-edges; `twin` swaps them and
`nxt` rotates a half-edge to the next one around its origin vertex.  Walking
``nxt[twin[h]]`` repeatedly traces the boundary of the face on the left of
``h``; those closed walks are grouped into *regions*, which carry their
genus and a count of untouched boundary circles as data.  Edges are owned
either by a named oriented curve or by the surface boundary (owner None).

Scenes are values: rewriting operations live in :mod:`curvepath.rewrite`
and always return new scenes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SameCurve, SceneSyntaxError, StructuralError, UnknownCurve

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass
class RegionData:
    """Topology of one complement region: genus and untouched boundary circles."""

    genus: int
    boundary_circles: int


@dataclass
class CurveData:
    """Registry entry for one oriented multicurve.

    ``parent``/``side``/``depth`` record how the curve was produced when it
    is a push-off: the curve it runs parallel to, which side of that curve
    it lives on, and how far out it sits in the stack of parallel copies.
    """

    name: str
    parent: int | None = None
    side: str | None = None
    depth: int = 0


@dataclass
class Scene:
    twin: dict[int, int] = field(default_factory=dict)
    nxt: dict[int, int] = field(default_factory=dict)
    origin: dict[int, int] = field(default_factory=dict)
    owner: dict[int, int | None] = field(default_factory=dict)
    forward: dict[int, bool] = field(default_factory=dict)
    region_of: dict[int, int] = field(default_factory=dict)
    regions: dict[int, RegionData] = field(default_factory=dict)
    curves: dict[int, CurveData] = field(default_factory=dict)
    # covers[h] lists, bottom to top, the near half-edges of strands laid
    # directly over h; used to place new push-offs beyond existing ones.
    covers: dict[int, list[int]] = field(default_factory=dict)

    # -- basic views -------------------------------------------------------

    def halves(self) -> list[int]:
        return sorted(self.twin)

    def vertex_ids(self) -> list[int]:
        return sorted(set(self.origin.values()))

    def vertex_halves(self, v: int) -> list[int]:
        """Half-edges out of v in rotation order, starting at the lowest id."""
        at = [h for h, o in self.origin.items() if o == v]
        if not at:
            return []
        start = min(at)
        out = [start]
        h = self.nxt[start]
        while h != start:
            out.append(h)
            h = self.nxt[h]
            if len(out) > len(self.twin):
                raise StructuralError("rotation", f"rotation at vertex {v} does not close")
        return out

    def degree(self, v: int) -> int:
        return sum(1 for o in self.origin.values() if o == v)

    def edge_count(self) -> int:
        return len(self.twin) // 2

    def clone(self) -> Scene:
        return Scene(
            twin=dict(self.twin),
            nxt=dict(self.nxt),
            origin=dict(self.origin),
            owner=dict(self.owner),
            forward=dict(self.forward),
            region_of=dict(self.region_of),
            regions={r: RegionData(d.genus, d.boundary_circles) for r, d in self.regions.items()},
            curves={c: CurveData(d.name, d.parent, d.side, d.depth) for c, d in self.curves.items()},
            covers={h: list(s) for h, s in self.covers.items() if s},
        )

    # -- face walks --------------------------------------------------------

    def face_step(self, h: int) -> int:
        """Next half-edge along the face walk keeping the region on the left."""
        return self.nxt[self.twin[h]]

    def walk_from(self, h: int) -> list[int]:
        out = [h]
        cur = self.face_step(h)
        while cur != h:
            out.append(cur)
            cur = self.face_step(cur)
            if len(out) > len(self.twin):
                raise StructuralError("face-walk", f"face walk from {h} does not close")
        return out

    def walks(self) -> list[list[int]]:
        """All face walks, each rotated to start at its lowest half-edge id."""
        seen: set[int] = set()
        out: list[list[int]] = []
        for h in self.halves():
            if h in seen:
                continue
            w = self.walk_from(h)
            seen.update(w)
            lo = w.index(min(w))
            out.append(w[lo:] + w[:lo])
        out.sort(key=lambda w: w[0])
        return out

    def region_walks(self) -> tuple[dict[int, list[list[int]]], list[list[int]]]:
        """Walks grouped by region, plus the unregioned outside walks."""
        grouped: dict[int, list[list[int]]] = {r: [] for r in self.regions}
        outside: list[list[int]] = []
        for w in self.walks():
            rs = {self.region_of.get(h) for h in w}
            if len(rs) != 1:
                raise StructuralError(
                    "region-walk", f"walk at {w[0]} spans region assignments {sorted(map(str, rs))}"
                )
            r = rs.pop()
            if r is None:
                outside.append(w)
            else:
                grouped.setdefault(r, []).append(w)
        return grouped, outside

    # -- global quantities -------------------------------------------------

    def euler_characteristic(self) -> int:
        v = len(self.vertex_ids())
        e = self.edge_count()
        per_region = sum(2 - 2 * d.genus - d.boundary_circles for d in self.regions.values())
        grouped, _ = self.region_walks()
        walks = sum(len(ws) for ws in grouped.values())
        return v - e + per_region - walks

    def surface_boundary_circles(self) -> int:
        """Boundary circles of the surface: map circles plus per-region counters."""
        ends: dict[int, int] = {}
        for h, own in self.owner.items():
            if own is None:
                ends[self.origin[h]] = ends.get(self.origin[h], 0) + 1
        # every boundary vertex has exactly two boundary ends, so the boundary
        # subgraph is a disjoint union of circles; count them by edges/vertices
        circles = 0
        seen: set[int] = set()
        for h, own in sorted(self.owner.items()):
            if own is not None or h in seen:
                continue
            cur = h
            while cur not in seen:
                seen.add(cur)
                seen.add(self.twin[cur])
                v = self.origin[self.twin[cur]]
                nexts = [
                    k
                    for k in self.vertex_halves(v)
                    if self.owner[k] is None and k != self.twin[cur]
                ]
                if len(nexts) != 1:
                    raise StructuralError("boundary", f"boundary does not chain at vertex {v}")
                cur = nexts[0]
            circles += 1
        counters = sum(d.boundary_circles for d in self.regions.values())
        return circles + counters

    # -- curve queries -----------------------------------------------------

    def curve_by_name(self, name: str) -> int:
        for cid, data in self.curves.items():
            if data.name == name:
                return cid
        raise UnknownCurve(name)

    def require_curve(self, c: int) -> int:
        if c not in self.curves:
            raise UnknownCurve(c)
        return c

    def curve_halves(self, c: int) -> list[int]:
        self.require_curve(c)
        return sorted(h for h, own in self.owner.items() if own == c)

    def crossings(self, a: int, b: int) -> list[int]:
        """Degree-4 vertices where curves a and b cross, in ascending order."""
        if a == b:
            raise SameCurve(a)
        self.require_curve(a)
        self.require_curve(b)
        out = []
        for v in self.vertex_ids():
            at = self.vertex_halves(v)
            if len(at) == 4 and {self.owner[h] for h in at} == {a, b}:
                out.append(v)
        return out

    def crossing_vertices(self, c: int) -> list[int]:
        """All crossing vertices involving curve c."""
        self.require_curve(c)
        out = []
        for v in self.vertex_ids():
            at = self.vertex_halves(v)
            if len(at) == 4 and c in {self.owner[h] for h in at}:
                out.append(v)
        return out

    def is_embedded(self, c: int) -> bool:
        """True when curve c never crosses itself (no degree-4 vertex is all-c)."""
        self.require_curve(c)
        for v in self.vertex_ids():
            at = self.vertex_halves(v)
            if len(at) == 4 and all(self.owner[h] == c for h in at):
                return False
        return True

    def _continuation(self, arriving: int) -> int | None:
        """The half continuing arriving's curve through its head vertex, or None at an endpoint."""
        v = self.origin[self.twin[arriving]]
        own = self.owner[arriving]
        cands = [
            h
            for h in self.vertex_halves(v)
            if self.owner[h] == own and h != self.twin[arriving]
        ]
        if not cands:
            return None
        if len(cands) > 1:
            raise StructuralError("taxonomy", f"curve {own} branches at vertex {v}")
        return cands[0]

    def curve_components(self, c: int) -> list[dict]:
        """Split curve c into maximal circles and boundary-to-boundary arcs.

        Each component is a dict with ``kind`` ("circle" or "arc") and
        ``halves``, the forward half-edges in order along the orientation.
        """
        fwd = [h for h in self.curve_halves(c) if self.forward[h]]
        succ: dict[int, int | None] = {h: None for h in fwd}
        pred: dict[int, int | None] = {h: None for h in fwd}
        for h in fwd:
            n = self._continuation(h)
            if n is not None:
                if not self.forward[n]:
                    raise StructuralError("orientation", f"curve {c} reverses at half {n}")
                succ[h] = n
                pred[n] = h
        out = []
        seen: set[int] = set()
        starts = sorted(h for h in fwd if pred[h] is None)
        for start in starts + sorted(set(fwd) - set(starts)):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            cur = succ[start]
            while cur is not None and cur != start:
                comp.append(cur)
                seen.add(cur)
                cur = succ[cur]
            out.append({"kind": "arc" if cur is None else "circle", "halves": comp})
        out.sort(key=lambda comp: comp["halves"][0])
        return out

    # -- serialization -----------------------------------------------------

    def serialize(self) -> str:
        grouped, _ = self.region_walks()
        doc = {
            "halfedges": [
                {
                    "id": h,
                    "twin": self.twin[h],
                    "next": self.nxt[h],
                    "origin": self.origin[h],
                    "owner": self.owner[h],
                    "forward": self.forward[h],
                    **({"stack": list(self.covers[h])} if self.covers.get(h) else {}),
                }
                for h in self.halves()
            ],
            "vertices": self.vertex_ids(),
            "regions": [
                {
                    "id": r,
                    "genus": self.regions[r].genus,
                    "closed_boundary_circles": self.regions[r].boundary_circles,
                    "walks": sorted(grouped.get(r, []), key=lambda w: w[0]),
                }
                for r in sorted(self.regions)
            ],
            "curves": [
                {
                    "id": c,
                    "name": self.curves[c].name,
                    "parent": self.curves[c].parent,
                    "side": self.curves[c].side,
                    "depth": self.curves[c].depth,
                }
                for c in sorted(self.curves)
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        problems: list[tuple[str, str]] = []

        def bad(invariant: str, message: str) -> None:
            problems.append((invariant, message))

        hs = set(self.twin)
        for table, label in (
            (self.nxt, "next"),
            (self.origin, "origin"),
            (self.owner, "owner"),
            (self.forward, "forward"),
        ):
            if set(table) != hs:
                bad("tables", f"{label} table keys disagree with the half-edge set")
                return ValidationReport(problems=problems)

        for h in sorted(hs):
            t = self.twin[h]
            if t == h:
                bad("twin", f"twin not fixed-point-free at half {h}")
            elif t not in hs or self.twin[t] != h:
                bad("twin", f"twin not an involution at half {h}")
            if self.nxt[h] not in hs:
                bad("rotation", f"next leaves the half-edge set at {h}")
            elif self.origin[self.nxt[h]] != self.origin[h]:
                bad("rotation", f"next changes origin at half {h}")
        if problems:
            return ValidationReport(problems=problems)
        if sorted(self.nxt.values()) != sorted(hs):
            bad("rotation", "next is not a permutation")
            return ValidationReport(problems=problems)

        for h in sorted(hs):
            if self.owner[h] != self.owner[self.twin[h]]:
                bad("owner", f"edge {h}/{self.twin[h]} has two owners")
            own = self.owner[h]
            if own is not None and own not in self.curves:
                bad("owner", f"half {h} owned by unregistered curve {own}")
            if own is None:
                if self.forward[h]:
                    bad("forward", f"boundary half {h} marked forward")
            elif h < self.twin[h] and self.forward[h] == self.forward[self.twin[h]]:
                bad("forward", f"edge {h}/{self.twin[h]} needs exactly one forward half")

        for c in sorted(self.curves):
            if not any(own == c for own in self.owner.values()):
                bad("owner", f"registered curve {c} owns no edges")

        # vertex taxonomy
        for v in self.vertex_ids():
            at = self.vertex_halves(v)
            if len(set(at)) != len(at):
                bad("rotation", f"rotation at vertex {v} repeats a half")
                continue
            owners = [self.owner[h] for h in at]
            if len(at) == 2:
                if owners[0] != owners[1]:
                    bad("taxonomy", f"degree-2 vertex {v} mixes owners")
            elif len(at) == 3:
                if owners.count(None) != 2:
                    bad("taxonomy", f"degree-3 vertex {v} is not a boundary endpoint")
            elif len(at) == 4:
                if None in owners:
                    bad("taxonomy", f"degree-4 vertex {v} touches the boundary")
                elif owners[0] == owners[2] and owners[1] == owners[3] and owners[0] != owners[1]:
                    pass
                else:
                    bad("taxonomy", f"tangential crossing at vertex {v}")
            else:
                bad("taxonomy", f"vertex {v} has degree {len(at)}")

        for v in self.vertex_ids():
            ends = [h for h in self.vertex_halves(v) if self.owner[h] is None]
            if len(ends) not in (0, 2):
                bad("boundary", f"vertex {v} has {len(ends)} boundary ends")

        # region structure
        for h in sorted(hs):
            r = self.region_of.get(h)
            if r is not None and r not in self.regions:
                bad("regions", f"half {h} assigned to unknown region {r}")
            if self.owner[h] is not None and r is None:
                bad("regions", f"curve half {h} has no region")
            if self.owner[h] is None and h < self.twin[h]:
                sides = (h in self.region_of, self.twin[h] in self.region_of)
                if sides == (True, True) or sides == (False, False):
                    bad("regions", f"boundary edge {h}/{self.twin[h]} must be regioned on one side")
        for d in self.regions.values():
            if d.genus < 0 or d.boundary_circles < 0:
                bad("regions", "negative region topology")
        if problems:
            return ValidationReport(problems=problems)

        try:
            grouped, outside = self.region_walks()
        except StructuralError as err:
            bad(err.invariant, str(err))
            return ValidationReport(problems=problems)
        for w in outside:
            if any(self.owner[h] is not None for h in w):
                bad("regions", f"outside walk at {w[0]} touches a curve")
        for r, ws in grouped.items():
            if not ws and hs:
                bad("regions", f"region {r} has no walks")
        if hs and len(self.regions) != len(grouped):
            bad("regions", "region table does not match traced walks")

        # connectivity of the underlying map
        if hs:
            comp = {min(hs)}
            frontier = [min(hs)]
            while frontier:
                h = frontier.pop()
                for k in (self.twin[h], self.nxt[h]):
                    if k not in comp:
                        comp.add(k)
                        frontier.append(k)
            if comp != hs:
                bad("connected", "the map is disconnected")
        elif len(self.regions) != 1:
            bad("regions", "an empty scene needs exactly one region")

        if problems:
            return ValidationReport(problems=problems)

        chi = self.euler_characteristic()
        boundary = self.surface_boundary_circles()
        if (2 - boundary - chi) % 2 != 0 or 2 - boundary - chi < 0:
            bad("euler", f"chi {chi} with {boundary} boundary circles is not a surface")
            return ValidationReport(problems=problems)
        genus = (2 - boundary - chi) // 2
        return ValidationReport(problems=[], chi=chi, surface_genus=genus, boundary_circles=boundary)


@dataclass
class ValidationReport:
    problems: list[tuple[str, str]]
    chi: int | None = None
    surface_genus: int | None = None
    boundary_circles: int | None = None

    @property
    def ok(self) -> bool:
        return not self.problems

    def payload(self) -> dict:
        if self.ok:
            return {
                "ok": True,
                "chi": self.chi,
                "genus": self.surface_genus,
                "boundary_circles": self.boundary_circles,
            }
        return {
            "ok": False,
            "problems": [{"invariant": i, "message": m} for i, m in self.problems],
        }


def scene_checked(s: Scene) -> Scene:
    """Raise StructuralError unless s validates; returns s for chaining."""
    report = s.validate()
    if not report.ok:
        invariant, message = report.problems[0]
        raise StructuralError(invariant, message)
    return s


def _expect(doc: dict, key: str, kind, position: str):
    if key not in doc:
        raise SceneSyntaxError(f"missing field {key!r}", position)
    val = doc[key]
    if kind is int and isinstance(val, bool):
        raise SceneSyntaxError(f"field {key!r} must be an integer", f"{position}.{key}")
    if not isinstance(val, kind):
        raise SceneSyntaxError(f"field {key!r} has the wrong type", f"{position}.{key}")
    return val


def parse_scene(document: str) -> Scene:
    """Parse a scene document and check every structural invariant."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as err:
        raise SceneSyntaxError(f"not valid JSON: {err.msg}", f"line {err.lineno}") from err
    if not isinstance(doc, dict):
        raise SceneSyntaxError("document must be a JSON object", "$")

    s = Scene()
    for i, h in enumerate(_expect(doc, "halfedges", list, "$")):
        pos = f"halfedges[{i}]"
        if not isinstance(h, dict):
            raise SceneSyntaxError("half-edge entries must be objects", pos)
        hid = _expect(h, "id", int, pos)
        if hid in s.twin:
            raise SceneSyntaxError(f"duplicate half-edge id {hid}", pos)
        s.twin[hid] = _expect(h, "twin", int, pos)
        s.nxt[hid] = _expect(h, "next", int, pos)
        s.origin[hid] = _expect(h, "origin", int, pos)
        owner = h.get("owner")
        if owner is not None and (isinstance(owner, bool) or not isinstance(owner, int)):
            raise SceneSyntaxError("owner must be a curve id or null", f"{pos}.owner")
        s.owner[hid] = owner
        s.forward[hid] = _expect(h, "forward", bool, pos)
        if "stack" in h:
            stack = _expect(h, "stack", list, pos)
            if any(isinstance(x, bool) or not isinstance(x, int) for x in stack):
                raise SceneSyntaxError("stack entries must be half ids", f"{pos}.stack")
            if stack:
                s.covers[hid] = list(stack)

    declared = set(_expect(doc, "vertices", list, "$"))
    if declared != set(s.origin.values()):
        raise SceneSyntaxError("vertex list disagrees with half-edge origins", "vertices")

    for i, r in enumerate(_expect(doc, "regions", list, "$")):
        pos = f"regions[{i}]"
        if not isinstance(r, dict):
            raise SceneSyntaxError("region entries must be objects", pos)
        rid = _expect(r, "id", int, pos)
        if rid in s.regions:
            raise SceneSyntaxError(f"duplicate region id {rid}", pos)
        s.regions[rid] = RegionData(
            genus=_expect(r, "genus", int, pos),
            boundary_circles=_expect(r, "closed_boundary_circles", int, pos),
        )
        for w in _expect(r, "walks", list, pos):
            if not isinstance(w, list) or any(
                isinstance(x, bool) or not isinstance(x, int) for x in w
            ):
                raise SceneSyntaxError("walks must be lists of half ids", f"{pos}.walks")
            for hid in w:
                if hid not in s.twin:
                    raise SceneSyntaxError(f"walk references unknown half {hid}", f"{pos}.walks")
                if hid in s.region_of:
                    raise SceneSyntaxError(f"half {hid} appears in two walks", f"{pos}.walks")
                s.region_of[hid] = rid

    for i, c in enumerate(_expect(doc, "curves", list, "$")):
        pos = f"curves[{i}]"
        if not isinstance(c, dict):
            raise SceneSyntaxError("curve entries must be objects", pos)
        cid = _expect(c, "id", int, pos)
        if cid in s.curves:
            raise SceneSyntaxError(f"duplicate curve id {cid}", pos)
        name = _expect(c, "name", str, pos)
        parent = c.get("parent")
        if parent is not None and (isinstance(parent, bool) or not isinstance(parent, int)):
            raise SceneSyntaxError("parent must be a curve id or null", f"{pos}.parent")
        side = c.get("side")
        if side not in (None, POSITIVE, NEGATIVE):
            raise SceneSyntaxError("side must be positive, negative or null", f"{pos}.side")
        depth = c.get("depth", 0)
        if isinstance(depth, bool) or not isinstance(depth, int):
            raise SceneSyntaxError("depth must be an integer", f"{pos}.depth")
        s.curves[cid] = CurveData(name=name, parent=parent, side=side, depth=depth)

    # serialized walks must really be face walks
    for hid, rid in s.region_of.items():
        if s.twin[hid] not in s.twin:
            continue
        if s.region_of.get(s.nxt[s.twin[hid]]) != rid:
            raise StructuralError(
                "region-walk", f"serialized walk is not closed under the face step at half {hid}"
            )
    return scene_checked(s)
