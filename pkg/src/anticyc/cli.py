"""Command line front end: config validation, class-set and Brandt caching,
eigenvalue ingestion and the verification suites."""

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from math import gcd
from importlib import resources

from . import btree, classfield, grosspoints, iwasawa, quatarith
from ._nt import factor, is_fundamental_discriminant, is_prime, kronecker, primes_up_to

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INVALID, EXIT_COUNTEREXAMPLE, EXIT_RESOURCE = 0, 1, 2, 3

PRESETS = {
    "11a": {"disc": 11, "level_plus": 1, "p": 3, "delta": 0, "dK": -20, "n_max": 3,
            "eigenvalues": "builtin:11a.csv"},
    "14a": {"disc": 2, "level_plus": 1, "p": 7, "delta": 1, "dK": -19, "n_max": 3,
            "eigenvalues": "builtin:14a.json"},
}


class CacheError(RuntimeError):
    pass


class ConfigError(ValueError):
    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = problems


# --------------------------------------------------------------------------
# configuration


class RunConfig:
    FIELDS = ("disc", "level_plus", "p", "delta", "dK", "n_max", "precision", "eigenvalues", "cache")

    def __init__(self, disc, level_plus, p, delta, dK, n_max=3, precision=None,
                 eigenvalues=None, cache=None, base_dir="."):
        self.disc, self.level_plus, self.p, self.delta, self.dK = disc, level_plus, p, delta, dK
        self.n_max = n_max
        self.precision = precision
        self.eigenvalues = eigenvalues
        self.cache = cache
        self.base_dir = base_dir

    @classmethod
    def from_dict(cls, d, base_dir="."):
        unknown = set(d) - set(cls.FIELDS)
        if unknown:
            raise ConfigError([f"unknown config field(s): {', '.join(sorted(unknown))}"])
        missing = [k for k in ("disc", "level_plus", "p", "delta", "dK") if k not in d]
        if missing:
            raise ConfigError([f"missing config field(s): {', '.join(missing)}"])
        for k in ("disc", "level_plus", "p", "delta", "dK", "n_max", "precision"):
            if k in d and d[k] is not None and not isinstance(d[k], int):
                raise ConfigError([f"field {k} must be an integer"])
        return cls(base_dir=base_dir, **d)

    def to_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}

    @property
    def level(self):
        return self.level_plus * self.p ** self.delta


def validate_config(cfg):
    """List of problems, each naming the hypothesis it violates."""
    probs = []
    p, dK, disc, Np = cfg.p, cfg.dK, cfg.disc, cfg.level_plus
    if not (isinstance(p, int) and p > 2 and is_prime(p)):
        probs.append("p must be an odd prime (local hypothesis)")
        return probs
    if cfg.delta not in (0, 1):
        probs.append("delta must be 0 or 1 (local hypothesis: Eichler order of level p^delta)")
    if not (dK < -4 and is_fundamental_discriminant(dK)):
        probs.append("dK must be a fundamental discriminant below -4 (unit group {+-1})")
        return probs
    if disc < 1 or any(e > 1 for e in factor(disc).values()) or len(factor(disc)) % 2 == 0:
        probs.append("disc must be squarefree with an odd number of primes (B definite over Q)")
        return probs
    if Np < 1 or any(e > 1 for e in (factor(Np).values() if Np > 1 else [])):
        probs.append("level_plus must be squarefree")
        return probs
    if (disc * Np * dK) % p == 0:
        probs.append("p must not divide disc * level_plus * dK (local hypothesis)")
    if disc > 1 and any(Np % q == 0 for q in factor(disc)):
        probs.append("level_plus must be prime to disc")
    for q in (factor(Np) if Np > 1 else {}):
        if kronecker(dK, q) != 1:
            probs.append(f"prime {q} of level_plus does not split in K (Heegner hypothesis: "
                         "each prime dividing p^delta N+ splits in K)")
    if cfg.delta == 1 and kronecker(dK, p) != 1:
        probs.append(f"p = {p} does not split in K (Heegner hypothesis for delta = 1)")
    for q in factor(disc):
        if kronecker(dK, q) != -1:
            probs.append(f"prime {q} of disc is not inert in K (Heegner hypothesis on N-)")
    try:
        if classfield.generic_root_number(Np, disc, cfg.delta, dK) != 1:
            probs.append("generic root number is -1 (the anticyclotomic family vanishes identically)")
    except ValueError as exc:
        probs.append(str(exc))
    if cfg.n_max is not None and cfg.n_max < 1:
        probs.append("n_max must be at least 1")
    if cfg.precision is not None and cfg.precision < 2 * ((cfg.n_max or 3) + 2):
        probs.append("precision M must be at least 2 (n_max + 2)")
    return probs


# --------------------------------------------------------------------------
# eigenvalue ingestion


def parse_eigenvalues(text):
    """CSV lines 'ell,a_ell' (optional header) or a JSON object {"ell": a}."""
    s = text.strip()
    if s.startswith("{"):
        return {int(k): int(v) for k, v in json.loads(s).items()}
    out = {}
    for row in csv.reader(io.StringIO(s)):
        if not row or row[0].strip().startswith("#"):
            continue
        try:
            ell, a = int(row[0]), int(row[1])
        except ValueError:
            continue
        out[ell] = a
    return out


def load_eigenvalues(source, base_dir="."):
    if source is None:
        return None
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        text = resources.files("anticyc").joinpath("data", name).read_text()
    else:
        path = source if os.path.isabs(source) else os.path.join(base_dir, source)
        with open(path) as f:
            text = f.read()
    return parse_eigenvalues(text)


# --------------------------------------------------------------------------
# cache


def _canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _checksum(payload):
    return hashlib.sha256(_canonical(payload).encode()).hexdigest()


class Cache:
    """One JSON file per key, written atomically by rename."""

    def __init__(self, root):
        self.root = root
        if root:
            os.makedirs(root, exist_ok=True)

    def _path(self, kind, key):
        name = kind + "_" + "_".join(f"{k}{v}" for k, v in sorted(key.items())) + ".json"
        return os.path.join(self.root, name)

    def get(self, kind, key):
        if not self.root:
            return None
        path = self._path(kind, key)
        if not os.path.exists(path):
            return None
        try:
            with open(path) as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(f"unreadable cache file {path}: {exc}")
        if doc.get("schema") != SCHEMA_VERSION:
            raise CacheError(f"cache schema mismatch in {path}")
        if doc.get("kind") != kind or doc.get("key") != key:
            raise CacheError(f"cache key mismatch in {path}")
        if doc.get("checksum") != _checksum(doc.get("payload")):
            raise CacheError(f"cache checksum mismatch in {path}")
        return doc["payload"]

    def put(self, kind, key, payload):
        if not self.root:
            return
        doc = {"schema": SCHEMA_VERSION, "kind": kind, "key": key,
               "checksum": _checksum(payload), "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as f:
                f.write(_canonical(doc))
            os.replace(tmp, self._path(kind, key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def lattice_json(L):
    return {"rows": [list(r) for r in L.rows], "den": L.den}


def lattice_from_json(d):
    return quatarith.Lattice(tuple(tuple(r) for r in d["rows"]), d["den"])


def class_set_payload(cs):
    return {"order": lattice_json(cs.order.lattice),
            "reps": [lattice_json(I.lattice) for I in cs.reps],
            "weights": list(cs.weights)}


def class_set_from_payload(R, payload):
    if lattice_from_json(payload["order"]) != R.lattice:
        raise CacheError("cached class set belongs to a different order")
    reps = [quatarith.RightIdeal(R, lattice_from_json(d)) for d in payload["reps"]]
    cs = quatarith.IdealClassSet(R, reps, list(payload["weights"]))
    if cs.mass() != quatarith.eichler_mass(R.B.disc, R.level):
        raise CacheError("cached class set does not saturate the mass formula")
    return cs


def cached_class_set(cache, R):
    key = {"disc": R.B.disc, "level": R.level}
    payload = cache.get("classset", key)
    if payload is not None:
        return class_set_from_payload(R, payload)
    cs = quatarith.right_ideal_class_set(R)
    cache.put("classset", key, class_set_payload(cs))
    return cs


def cached_brandt(cache, cs, ell):
    R = cs.order
    key = {"disc": R.B.disc, "level": R.level, "ell": ell}
    payload = cache.get("brandt", key)
    if payload is not None:
        return payload["matrix"]
    mat = quatarith.brandt_matrix(cs, ell)
    cache.put("brandt", key, {"matrix": mat})
    return mat


# --------------------------------------------------------------------------
# sessions


class Session:
    def __init__(self, cfg, cache):
        self.cfg = cfg
        self.cache = cache
        self._gctx = None
        self._phi = None

    def gctx(self):
        if self._gctx is None:
            c = self.cfg
            cache = self.cache
            self._gctx = grosspoints.GrossContext(
                c.disc, c.level_plus, c.p, c.delta, c.dK, n_max=c.n_max or 3,
                precision=c.precision, class_set_factory=lambda R: cached_class_set(cache, R))
        return self._gctx

    def eigenvalues(self):
        ev = load_eigenvalues(self.cfg.eigenvalues, self.cfg.base_dir)
        if not ev:
            raise ConfigError(["no eigenvalue data: set 'eigenvalues' in the config"])
        return ev

    def brandt(self, ells):
        cs = self.gctx().class_set
        return {ell: cached_brandt(self.cache, cs, ell) for ell in ells}

    def phi(self, bound=13):
        if self._phi is None:
            g = self.gctx()
            ev = self.eigenvalues()
            N = g.disc * g.level
            ells = [l for l in sorted(ev) if l <= bound and N % l]
            mats = self.brandt(ells)
            targets = {l: ev[l] for l in ells}
            phi = grosspoints.eigenform_from_brandt(g.class_set, targets, p=g.p, delta=g.delta,
                                                    brandt=mats)
            computed = grosspoints.p_eigenvalue(g, phi)
            if g.delta == 0:
                if ev.get(g.p) is not None and ev[g.p] != computed:
                    raise grosspoints.EigenformError(
                        f"ingested a_p = {ev[g.p]} but the operator at p gives {computed}")
                phi.ap = computed
            else:
                phi.ap = computed
            grosspoints.unit_root(phi.ap, g.p, 2, g.delta)
            self._phi = phi
        return self._phi

    def tower(self, n_top):
        return iwasawa.build_tower(self.gctx(), self.phi(), n_top)


# --------------------------------------------------------------------------
# output helpers


def parse_range(text, default):
    if text is None:
        return list(default)
    out = []
    for part in str(text).split(","):
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        elif "-" in part[1:]:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def emit(args, obj, human):
    if args.json:
        print(json.dumps(obj, sort_keys=True, default=_json_default))
    else:
        print(human)


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(repr(o))


def _table(rows):
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).rjust(w) for c, w in zip(r, widths)) for r in rows)


# --------------------------------------------------------------------------
# commands


def cmd_validate(sess, args):
    probs = validate_config(sess.cfg)
    emit(args, {"ok": not probs, "problems": probs},
         "OK" if not probs else "INVALID\n" + "\n".join("  - " + p for p in probs))
    return EXIT_OK if not probs else EXIT_INVALID


def cmd_class_set(sess, args):
    cs = sess.gctx().class_set
    rows = [("class", "norm", "weight")] + [(i, str(I.norm()), w) for i, (I, w) in enumerate(zip(cs.reps, cs.weights))]
    obj = {"classes": len(cs), "weights": cs.weights, "mass": str(cs.mass()),
           "reps": [lattice_json(I.lattice) for I in cs.reps]}
    emit(args, obj, _table(rows) + f"\nmass = {cs.mass()}")
    return EXIT_OK


def _default_ells(g, bound=13):
    return [l for l in primes_up_to(bound) if (g.disc * g.level) % l]


def cmd_brandt(sess, args):
    g = sess.gctx()
    ells = args.ell or _default_ells(g)
    mats = sess.brandt(ells)
    human = "\n".join(f"B({l}) = {m}" for l, m in mats.items())
    emit(args, {str(l): m for l, m in mats.items()}, human)
    return EXIT_OK


def cmd_eigenform(sess, args):
    phi = sess.phi()
    g = sess.gctx()
    obj = phi.to_json()
    obj["alpha_mod_p^10"] = grosspoints.unit_root(phi.ap, g.p, 10, g.delta) if g.delta == 0 else phi.ap
    obj["inner_product"] = str(phi.inner_product())
    human = (f"phi = {phi.values}  weights = {phi.weights}\n"
             f"eigenvalues: {phi.eigenvalues}\n"
             f"eigenvalue at p = {phi.ap} (ordinary: {phi.ordinarity_certificate()})\n"
             f"(phi, phi) = {phi.inner_product()}")
    emit(args, obj, human)
    return EXIT_OK


def _levels(sess, args):
    return parse_range(args.n, [1])


def cmd_theta(sess, args):
    ns = _levels(sess, args)
    tw = sess.tower(max(ns))
    out = {}
    lines = []
    for n in ns:
        th = tw.theta(n)
        out[str(n)] = th.to_json()
        lines.append(f"theta_{n}:")
        for A in sorted(th.coeffs):
            lines.append(f"  [{th.group.label(A)}]  {th.coeffs[A]!r}")
    emit(args, out, "\n".join(lines))
    return EXIT_OK


def cmd_lp(sess, args):
    ns = _levels(sess, args)
    tw = sess.tower(max(ns))
    phi = sess.phi()
    out, lines = {}, []
    for n in ns:
        L = iwasawa.lp_element(tw.theta(n), phi.inner_product(), primitive=args.primitive)
        out[str(n)] = L.element.to_json()
        lines.append(f"L_{n}{' (primitive)' if args.primitive else ''}:")
        for A in sorted(L.element.coeffs):
            lines.append(f"  [{L.element.group.label(A)}]  {L.element.coeffs[A]!r}")
    emit(args, out, "\n".join(lines))
    return EXIT_OK


def cmd_specialize(sess, args):
    ns = _levels(sess, args)
    n = max(ns)
    g = sess.gctx()
    tw = sess.tower(n)
    chars = classfield.characters(g.groups(n), n)
    idx = args.character or 0
    if not 0 <= idx < len(chars):
        print(f"character index out of range (0..{len(chars) - 1})", file=sys.stderr)
        return EXIT_INVALID
    chi = chars[idx]
    th = tw.theta(n)
    v1 = iwasawa.specialize(th, chi)
    v2 = iwasawa.specialize(iwasawa.lp_element(th).element, chi)
    obj = {"n": n, "character": idx, "m": chi.m, "theta": v1.to_json(), "lp": v2.to_json()}
    emit(args, obj, f"chi_{idx} (order {chi.m}) at level {n}\n  theta: {v1!r}\n  theta*theta^*: {v2!r}")
    return EXIT_OK


def _report(args, name, reports):
    ok = all(r.get("ok", False) for r in reports)
    lines = [f"{name}: {'PASS' if ok else 'FAIL'}"]
    for r in reports:
        brief = {k: v for k, v in r.items() if k != "counterexample" or v}
        lines.append("  " + json.dumps(brief, sort_keys=True, default=_json_default))
    emit(args, {"check": name, "ok": ok, "reports": reports}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def verify_tree(cfg, depth):
    ctx = btree.LocalContext(cfg.p, cfg.dK, n_max=max(depth + 2, 4))
    verts = btree.descend(ctx, depth)
    s0 = [v for v in verts if btree.lp_invariant(ctx, v) >= 1]
    s1 = []
    for v in verts:
        if btree.lp_invariant(ctx, v) >= 2:
            s1.append(btree.OneLattice(btree.predecessor(ctx, v, "upper"), v))
            s1.append(btree.OneLattice(v, btree.predecessor(ctx, v, "lower")))
    r0 = btree.verify_trace_relations(ctx, 0, s0)
    r1 = btree.verify_trace_relations(ctx, 1, s1)
    r0["delta"], r1["delta"] = 0, 1
    return [r0, r1]


def cmd_verify(sess, args):
    g = None
    what = args.what
    if what == "tree":
        depth = max(parse_range(args.n, [4]))
        return _report(args, "tree", verify_tree(sess.cfg, depth))
    g = sess.gctx()
    if what == "conductor":
        ns = parse_range(args.n, range(0, (sess.cfg.n_max or 3) + 1))
        return _report(args, "conductor", [grosspoints.verify_conductors(g, n) for n in ns])
    phi = sess.phi()
    if what == "distribution":
        ns = parse_range(args.n, [1, 2])
        tw = sess.tower(max(ns) + 1)
        reps = []
        for n in ns:
            reps.append(grosspoints.verify_global_trace(g, phi, n, tables=dict(tw.tables)))
            reps.append(iwasawa.check_distribution(tw, n))
        return _report(args, "distribution", reps)
    if what == "vanishing":
        if g.delta != 0:
            print("vanishing applies to delta = 0 only", file=sys.stderr)
            return EXIT_INVALID
        ns = parse_range(args.n, [1, 2])
        tw = sess.tower(max(ns))
        reps = []
        for n in ns:
            prim = classfield.characters(g.groups(n), n)
            zs = [iwasawa.verify_shifted_vanishing(tw.tables, g.group(n), g.tower(n - 1), c)["zero"]
                  for c in prim]
            reps.append({"n": n, "characters": len(prim), "zero": sum(zs), "ok": all(zs)})
        return _report(args, "vanishing", reps)
    if what == "basis":
        ns = parse_range(args.n, [2])
        gamma = next((x, 1) for x in range(1, 100) if classfield.k_norm(g.dK, (x, 1)) % g.p)
        return _report(args, "basis", [iwasawa.verify_basis_independence(g, phi, max(ns), gamma)])
    if what == "galois":
        ns = parse_range(args.n, [1, 2])
        tw = sess.tower(max(ns))
        reps = []
        for n in ns:
            th = tw.theta(n)
            lp = iwasawa.lp_element(th).element
            thstar = iwasawa.involution(th)
            good = checked = 0
            for chi in classfield.characters(g.groups(n), n):
                v = iwasawa.specialize(lp, chi)
                ok = iwasawa.ledger_equal(iwasawa.specialize(thstar, chi),
                                          iwasawa.specialize(th, chi.inverse()), tw.ring, chi.m)
                for a in range(1, chi.m):
                    if gcd(a, chi.m) == 1:
                        ok &= iwasawa.ledger_equal(iwasawa.galois_ledger(v, a),
                                                   iwasawa.specialize(lp, chi.galois(a)), tw.ring, chi.m)
                checked += 1
                good += ok
            reps.append({"n": n, "checked": checked, "passed": good, "ok": good == checked})
        return _report(args, "galois", reps)
    raise ValueError(what)


def export_bundle(sess, n_top):
    g = sess.gctx()
    phi = sess.phi()
    tw = sess.tower(n_top)
    return {
        "schema": SCHEMA_VERSION,
        "config": {k: v for k, v in sess.cfg.to_dict().items() if k not in ("cache",)},
        "class_set": class_set_payload(g.class_set),
        "brandt": {str(l): m for l, m in sess.brandt(_default_ells(g)).items()},
        "eigenform": phi.to_json(),
        "theta": {str(n): tw.theta(n).to_json() for n in range(1, n_top + 1)},
        "tables": {str(n): {g.group(n).label(A): v for A, v in t.items()} for n, t in tw.tables.items()},
    }


def import_bundle(doc, R=None):
    """Rebuild the in-memory values of an exported bundle."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise CacheError("bundle schema mismatch")
    out = {"config": doc["config"], "eigenform": grosspoints.Eigenform.from_json(doc["eigenform"]),
           "brandt": {int(k): v for k, v in doc["brandt"].items()},
           "tables": {int(n): {tuple(int(x) for x in k.split(",")): v for k, v in t.items()}
                      for n, t in doc["tables"].items()},
           "theta": {int(n): [(e[0], [tuple(t) for t in e[1]]) for e in th["entries"]]
                     for n, th in doc["theta"].items()}}
    if R is not None:
        out["class_set"] = class_set_from_payload(R, doc["class_set"])
    else:
        out["class_set"] = doc["class_set"]
    return out


def cmd_export(sess, args):
    n_top = max(_levels(sess, args))
    doc = export_bundle(sess, n_top)
    text = json.dumps(doc, sort_keys=True, default=_json_default)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        print(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--preset", choices=sorted(PRESETS), help="built-in reference configuration")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cache", help="cache directory")
    common.add_argument("--n", help="level or range, e.g. 2 or 1..3")
    common.add_argument("--precision", type=int, help="working precision M")
    common.add_argument("--character", type=int, help="index into the primitive character list")
    ap = argparse.ArgumentParser(prog="anticyc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("validate", "class-set", "eigenform", "theta", "specialize"):
        sub.add_parser(name, parents=[common])
    b = sub.add_parser("brandt", parents=[common])
    b.add_argument("--ell", type=int, action="append")
    lp = sub.add_parser("lp", parents=[common])
    lp.add_argument("--primitive", action="store_true")
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("what", choices=["tree", "conductor", "distribution", "vanishing", "basis", "galois"])
    ex = sub.add_parser("export", parents=[common])
    ex.add_argument("--out")
    return ap


def load_config(args):
    if args.config and args.preset:
        raise ConfigError(["give either --config or --preset"])
    if args.preset:
        d = dict(PRESETS[args.preset])
        base = "."
    elif args.config:
        with open(args.config) as f:
            d = json.load(f)
        if not isinstance(d, dict):
            raise ConfigError(["config must be a JSON object"])
        base = os.path.dirname(os.path.abspath(args.config))
    else:
        raise ConfigError(["no configuration: pass --config PATH or --preset NAME"])
    cfg = RunConfig.from_dict(d, base)
    if args.precision is not None:
        cfg.precision = args.precision
    if args.cache is not None:
        cfg.cache = args.cache
    return cfg


COMMANDS = {
    "validate": cmd_validate, "class-set": cmd_class_set, "brandt": cmd_brandt,
    "eigenform": cmd_eigenform, "theta": cmd_theta, "lp": cmd_lp,
    "specialize": cmd_specialize, "verify": cmd_verify, "export": cmd_export,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.command != "validate":
        probs = validate_config(cfg)
        if probs:
            print("invalid configuration:\n" + "\n".join("  - " + p for p in probs), file=sys.stderr)
            return EXIT_INVALID
    try:
        cache = Cache(cfg.cache)
        sess = Session(cfg, cache)
        return COMMANDS[args.command](sess, args)
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except btree.PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (grosspoints.EigenformError, quatarith.ClassSetError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE


if __name__ == "__main__":
    sys.exit(main())
