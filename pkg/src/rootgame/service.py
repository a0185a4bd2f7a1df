"""HTTP JSON API for interactive game sessions.

Sessions live in memory, keyed by opaque ids; every mutating request
carries the session revision it saw, and a stale revision is refused
with 409 so two tabs cannot silently clobber each other.  An optional
JSON-lines snapshot file persists session states across restarts.
All state transitions go through the game module, so a browser session
can never produce a position the engine itself would not.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import board, game, solver, weyl
from .embedding import EmbeddingSpecError, build_embedding
from .roots import GroupSpecError

_EMBEDDINGS = {}
_EMB_LOCK = threading.Lock()


def _embedding(spec: str):
    with _EMB_LOCK:
        e = _EMBEDDINGS.get(spec)
        if e is None:
            e = build_embedding(spec)
            _EMBEDDINGS[spec] = e
        return e


class Session:
    def __init__(self, sid, embedding_spec, pi_literal, mode):
        self.id = sid
        self.embedding_spec = embedding_spec
        self.pi_literal = pi_literal
        e = _embedding(embedding_spec)
        pi = weyl.parse_element(e.target, pi_literal)
        self.position = game.initial_position(e, pi, mode)
        self.revision = 0
        self.created = time.time()
        self.updated = self.created
        self.lock = threading.Lock()

    def state(self, include_layout=False):
        pos = self.position
        st = game.status(pos)
        out = {
            "id": self.id,
            "revision": self.revision,
            "embedding": self.embedding_spec,
            "pi": self.pi_literal,
            "mode": pos.mode,
            "status": {"verdict": st.verdict,
                       "witness": list(st.witness) if st.witness else None},
            "position": pos.to_json(),
            "board": board.render_position(pos),
            "created": self.created,
            "updated": self.updated,
        }
        if include_layout:
            out["layout"] = layout_payload(self.embedding_spec)
        return out

    def apply(self, step_obj):
        step = game.step_from_json(step_obj)
        self.position = game.apply_step(self.position, step)
        self.revision += 1
        self.updated = time.time()

    def undo(self):
        pos = self.position
        if not pos.history:
            raise game.IllegalStepError("nothing to undo")
        e = pos.embedding
        pi = weyl.parse_element(e.target, self.pi_literal)
        fresh = game.initial_position(e, pi, pos.mode)
        for step in pos.history[:-1]:
            fresh = game.apply_step(fresh, step)
        self.position = fresh
        self.revision += 1
        self.updated = time.time()


def layout_payload(embedding_spec: str):
    e = _embedding(embedding_spec)
    rs = e.target
    lay = rs.layout()
    squares = []
    for r in rs.roots:
        row, col, comp = lay[r.id]
        img = e.phat_root(r.id)
        squares.append({
            "id": r.id, "name": r.name, "component": comp,
            "row": row, "col": col, "height": r.height,
            "phat": None if img is None else
                {"id": img.id, "name": img.name},
        })
    boards = []
    for c in range(len(rs.factors)):
        rows, cols = rs.board_shape(c)
        boards.append({"component": c, "rows": rows, "cols": cols})
    source = [{"id": r.id, "name": r.name} for r in e.source.roots]
    # Pair table for arrow previews: for each root beta, the (from, to)
    # square ids whose difference is beta, in move-scan order.
    move_pairs = {}
    for beta, pairs in enumerate(e.move_pairs()):
        if pairs:
            move_pairs[str(beta)] = [[a.bit_length() - 1, b.bit_length() - 1]
                                     for a, b in pairs]
    return {"embedding": e.spec, "squares": squares, "boards": boards,
            "source_roots": source, "copies": e.n_copies,
            "diagonal_identity": e.diagonal_identity,
            "move_pairs": move_pairs}


SCHEMAS = {
    "POST /sessions": {
        "body": {"embedding": "embedding spec string",
                 "pi": "element literal", "mode": "top|free (optional)"},
        "response": "session state + layout",
    },
    "GET /sessions/{id}": {"response": "session state"},
    "POST /sessions/{id}/steps": {
        "body": {"revision": "int (optional but checked when present)",
                 "step": {"kind": "move|split|merge",
                          "beta": "root id (move)",
                          "region": "region index (move/merge)",
                          "ideal": "[root ids] (split)",
                          "k1": "copy (merge)", "k2": "copy (merge)"}},
        "response": "session state",
        "errors": {"404": "unknown session", "409": "revision conflict",
                   "422": "illegal step, body.error carries the reason"},
    },
    "POST /sessions/{id}/undo": {"body": {"revision": "int (optional)"}},
    "GET /sessions/{id}/hints": {
        "query": {"budget": "solver node budget (optional)"},
        "response": {"legal_moves": "[{beta, region}]",
                     "qualifying_splits": "[[root ids]]",
                     "splitting_subsets": "[[root ids]] (free mode)",
                     "legal_merges": "[{region, k1, k2}]",
                     "solver_verdict": "present when budget given"},
    },
    "GET /layouts": {"query": {"embedding": "embedding spec"},
                     "response": "squares, boards, phat table"},
}


class GameService:
    def __init__(self, snapshot: str = None):
        self.sessions = {}
        self.lock = threading.Lock()
        self.snapshot = snapshot
        if snapshot and os.path.exists(snapshot):
            self._load_snapshot()

    def _load_snapshot(self):
        with open(self.snapshot) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                try:
                    s = Session(rec["id"], rec["embedding"], rec["pi"],
                                rec.get("mode"))
                    for step in rec.get("history", []):
                        s.apply(step)
                    s.revision = rec.get("revision", s.revision)
                    self.sessions[s.id] = s
                except Exception:
                    continue

    def _persist(self, session: Session):
        if not self.snapshot:
            return
        pos = session.position
        rec = {"id": session.id, "embedding": session.embedding_spec,
               "pi": session.pi_literal, "mode": pos.mode,
               "history": [s.to_json() for s in pos.history],
               "revision": session.revision}
        with open(self.snapshot, "a") as fh:
            fh.write(json.dumps(rec) + "\n")

    def create(self, embedding_spec, pi_literal, mode=None) -> Session:
        s = Session(uuid.uuid4().hex[:16], embedding_spec, pi_literal, mode)
        with self.lock:
            self.sessions[s.id] = s
        self._persist(s)
        return s

    def get(self, sid) -> Session:
        with self.lock:
            return self.sessions.get(sid)

    def hints(self, session: Session, budget=None):
        pos = session.position
        out = {
            "legal_moves": [{"beta": b, "region": r}
                            for b, r in game.legal_moves(pos)],
            "legal_merges": [{"region": r, "k1": k1, "k2": k2}
                             for r, k1, k2 in game.legal_merges(pos)],
        }
        rs = pos.embedding.target
        if pos.mode == game.TOP:
            out["qualifying_splits"] = [rs.mask_ids(m)
                                        for m in game.qualifying_splits(pos)]
        else:
            out["splitting_subsets"] = [
                rs.mask_ids(m) for m, _ in pos.embedding.splitting_masks()]
        if budget:
            cfg = solver.SolverConfig(node_budget=int(budget))
            verdict = solver.solve_position(pos, cfg)
            out["solver_verdict"] = verdict.to_json()
        return out


class _Handler(BaseHTTPRequestHandler):
    service: GameService = None
    static_dir: str = None

    def log_message(self, fmt, *args):
        pass

    # -- plumbing ---------------------------------------------------------

    def _send(self, code, payload, content_type="application/json"):
        body = payload if isinstance(payload, bytes) else \
            json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _body(self):
        n = int(self.headers.get("Content-Length") or 0)
        if not n:
            return {}
        return json.loads(self.rfile.read(n) or b"{}")

    def do_OPTIONS(self):
        self._send(204, b"")

    # -- routing ----------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            if parts == ["schema"]:
                return self._send(200, SCHEMAS)
            if parts == ["layouts"]:
                q = parse_qs(url.query)
                spec = (q.get("embedding") or [None])[0]
                if not spec:
                    return self._send(400, {"error": "embedding required"})
                return self._send(200, layout_payload(spec))
            if len(parts) == 2 and parts[0] == "sessions":
                s = self.service.get(parts[1])
                if s is None:
                    return self._send(404, {"error": "unknown session"})
                with s.lock:
                    return self._send(200, s.state())
            if len(parts) == 3 and parts[0] == "sessions" \
                    and parts[2] == "hints":
                s = self.service.get(parts[1])
                if s is None:
                    return self._send(404, {"error": "unknown session"})
                q = parse_qs(url.query)
                budget = (q.get("budget") or [None])[0]
                with s.lock:
                    return self._send(200, self.service.hints(s, budget))
            if self.static_dir and (not parts or parts[0] != "sessions"):
                return self._static(url.path)
            return self._send(404, {"error": "no such route"})
        except (GroupSpecError, EmbeddingSpecError, weyl.WeylParseError,
                ValueError) as exc:
            return self._send(400, {"error": str(exc)})

    def _static(self, path):
        rel = path.lstrip("/") or "index.html"
        full = os.path.realpath(os.path.join(self.static_dir, rel))
        if not full.startswith(os.path.realpath(self.static_dir)) \
                or not os.path.isfile(full):
            return self._send(404, {"error": "not found"})
        ctype = "text/html"
        if full.endswith(".js"):
            ctype = "text/javascript"
        elif full.endswith(".css"):
            ctype = "text/css"
        elif full.endswith(".svg"):
            ctype = "image/svg+xml"
        with open(full, "rb") as fh:
            return self._send(200, fh.read(), ctype)

    def do_POST(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            body = self._body()
        except json.JSONDecodeError:
            return self._send(400, {"error": "body is not JSON"})
        try:
            if parts == ["sessions"]:
                for fieldname in ("embedding", "pi"):
                    if fieldname not in body:
                        return self._send(
                            422, {"error": f"missing field {fieldname!r}"})
                s = self.service.create(body["embedding"], body["pi"],
                                        body.get("mode"))
                return self._send(201, s.state(include_layout=True))
            if len(parts) == 3 and parts[0] == "sessions":
                s = self.service.get(parts[1])
                if s is None:
                    return self._send(404, {"error": "unknown session"})
                with s.lock:
                    rev = body.get("revision")
                    if rev is not None and rev != s.revision:
                        return self._send(
                            409, {"error": "revision conflict",
                                  "expected": s.revision, "got": rev})
                    if parts[2] == "steps":
                        step = body.get("step", body)
                        s.apply(step)
                        self.service._persist(s)
                        return self._send(200, s.state())
                    if parts[2] == "undo":
                        s.undo()
                        self.service._persist(s)
                        return self._send(200, s.state())
                return self._send(404, {"error": "no such route"})
            return self._send(404, {"error": "no such route"})
        except game.IllegalStepError as exc:
            return self._send(422, {"error": exc.reason})
        except (GroupSpecError, EmbeddingSpecError, weyl.WeylParseError,
                ValueError) as exc:
            return self._send(422, {"error": str(exc)})


def make_server(port=0, static_dir=None, snapshot=None):
    service = GameService(snapshot=snapshot)
    handler = type("BoundHandler", (_Handler,),
                   {"service": service, "static_dir": static_dir})
    httpd = ThreadingHTTPServer(("127.0.0.1", port), handler)
    httpd.service = service
    return httpd


def serve(port=8642, static_dir=None, snapshot=None):
    httpd = make_server(port=port, static_dir=static_dir, snapshot=snapshot)
    host, actual_port = httpd.server_address
    print(f"serving on http://{host}:{actual_port}"
          + (f" (static: {static_dir})" if static_dir else ""), flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
