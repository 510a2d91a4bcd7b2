"""Command-line entry point: ``relaxrev <command> ...``.

Exit status: 0 success, 1 usage, 2 unreadable or malformed input,
3 semantic failure (revision failed, enumeration too large, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence, TextIO

from . import __version__
from .core import KnowledgeBase, entails, is_consistent, iter_bits, popcount
from .errors import ParseError, RelaxrevError, RevisionFailed, SignatureError
from .io.config import RunConfig, load_config
from .io.document import (
    KBDocument, build_system, load_document, merge_documents, parse_sentence,
)

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SEMANTIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--bound", type=int, help="carrier/domain size bound for FOL and DL")
    common.add_argument("--format", choices=("json", "text"), help="output format (default json)")
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--seed", type=int, help="reserved; no command is randomized")

    parser = _Parser(prog="relaxrev", description="Relaxation-based belief revision.")
    parser.add_argument("--version", action="version", version=f"relaxrev {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("models", parents=[common], help="list the models of a knowledge base")
    p.add_argument("kb")
    p.add_argument("--limit", type=int, default=20, help="models to print (0 for none)")

    p = sub.add_parser("consistent", parents=[common], help="does the base have a non-trivial model")
    p.add_argument("kb")

    p = sub.add_parser("entails", parents=[common], help="does the base entail a sentence")
    p.add_argument("kb")
    p.add_argument("sentence")

    def operator_options(p):
        p.add_argument("--op", help="relaxation or retraction name")
        p.add_argument("--k", type=int, help="operator parameter k")
        p.add_argument("--context", choices=("new", "old", "none"),
                       help="base whose models decide exception eligibility")
        p.add_argument("--exceptions", help="comma-separated exception concepts")

    p = sub.add_parser("relax", parents=[common], help="apply an operator to every sentence")
    p.add_argument("kb")
    operator_options(p)
    p.add_argument("--times", type=int, default=1, help="how often to apply it")

    p = sub.add_parser("revise", parents=[common], help="revise OLD by NEW")
    p.add_argument("old")
    p.add_argument("new")
    operator_options(p)
    p.add_argument("--mode", choices=("minimal", "coherent"))
    p.add_argument("--max-cap", type=int)
    p.add_argument("--allow-non-exhaustive", action="store_true", default=None)

    p = sub.add_parser("check-agm", parents=[common], help="check the postulates exhaustively")
    p.add_argument("operator_config", help="TOML file naming the operator and mode")
    p.add_argument("--atoms", type=int, help="number of propositional atoms")
    p.add_argument("--sentences", type=int, help="largest base size in the corpus")
    p.add_argument("--depth", type=int, help="formula depth of the sentence pool")
    return parser


# ---------------------------------------------------------------------------
# helpers


def _config(args) -> RunConfig:
    path = getattr(args, "operator_config", None) or args.config
    return load_config(path) if path else RunConfig()


def _bound(args, cfg: RunConfig, *docs: KBDocument) -> int | None:
    if args.bound is not None:
        if args.bound < 1:
            raise UsageError("--bound must be at least 1")
        return args.bound
    if cfg.bound is not None:
        return cfg.bound
    return next((d.bound for d in docs if d.bound is not None), None)


def _doc_system(doc: KBDocument, bound: int | None):
    return doc.system(bound)


def _exceptions(args, cfg: RunConfig, system, doc_exceptions: tuple) -> tuple:
    if not system.logic.startswith("DL"):
        return ()
    from .logics.dl.syntax import parse_concept
    if args.exceptions is not None:
        texts = [t.strip() for t in args.exceptions.split(",") if t.strip()]
    elif cfg.exceptions is not None:
        texts = list(cfg.exceptions)
    else:
        return tuple(doc_exceptions)
    out = []
    for t in texts:
        c = parse_concept(t)
        try:
            system.signature.check_concept(c)
        except SignatureError as exc:
            raise ParseError(f"exception {t!r}: {exc}", 1, 1) from None
        out.append(c)
    return tuple(out)


def _relaxation(args, cfg: RunConfig, system, old, new, doc_exceptions=()):
    from .operators import make_relaxation
    name = args.op or cfg.operator
    if not name:
        raise UsageError("no operator: pass --op or set [operator] name in the config")
    params: dict[str, Any] = cfg.operator_params()
    if args.k is not None:
        params["k"] = args.k
    if args.context is not None:
        params["context"] = args.context
    exceptions = _exceptions(args, cfg, system, doc_exceptions)
    if exceptions:
        params["exceptions"] = exceptions
    return make_relaxation(name, system, params, old, new)


def _model_json(system, index: int) -> Any:
    return system.format_model(system.model_at(index))


# ---------------------------------------------------------------------------
# commands; each returns (payload, text lines)


def cmd_models(args, cfg):
    doc = load_document(args.kb)
    system = _doc_system(doc, _bound(args, cfg, doc))
    bits = system.kb_mask(doc.sentences)
    nontrivial = bits & system.nontrivial
    shown = list(iter_bits(nontrivial))[: max(args.limit, 0)]
    payload = {
        "system": system.describe(),
        "count": popcount(nontrivial),
        "trivial": popcount(bits & system.trivial),
        "models": [_model_json(system, i) for i in shown],
    }
    lines = [f"{payload['count']} non-trivial models ({payload['trivial']} trivial) in {payload['system']}"]
    lines += [json.dumps(m, sort_keys=True) if isinstance(m, dict) else str(m) for m in payload["models"]]
    if len(shown) < payload["count"]:
        lines.append(f"... {payload['count'] - len(shown)} more")
    return payload, lines


def cmd_consistent(args, cfg):
    doc = load_document(args.kb)
    system = _doc_system(doc, _bound(args, cfg, doc))
    ok = is_consistent(system, doc.sentences)
    return {"system": system.describe(), "consistent": ok}, ["consistent" if ok else "inconsistent"]


def cmd_entails(args, cfg):
    doc = load_document(args.kb)
    system = _doc_system(doc, _bound(args, cfg, doc))
    sentence = parse_sentence(doc, args.sentence)
    try:
        system.check_sentence(sentence)
    except SignatureError as exc:
        raise ParseError(str(exc), 1, 1) from None
    ok = entails(system, doc.sentences, sentence)
    return ({"system": system.describe(), "sentence": system.format_sentence(sentence), "entails": ok},
            ["entailed" if ok else "not entailed"])


def cmd_relax(args, cfg):
    doc = load_document(args.kb)
    system = _doc_system(doc, _bound(args, cfg, doc))
    if system.logic.startswith("DL") and doc.fragment is None:
        system = build_system("DL", doc.signature, system.bound, "ALC")
    rel = _relaxation(args, cfg, system, doc.sentences, doc.sentences, doc.exceptions)
    if args.times < 0:
        raise UsageError("--times must be non-negative")
    out = [rel.power(s, args.times) for s in doc.sentences]
    texts = [system.format_sentence(s) for s in out]
    return ({"system": system.describe(), "operator": rel.name, "times": args.times, "relaxed": texts},
            texts)


def cmd_revise(args, cfg):
    from .revision import RevisionConfig, revise
    old, new = load_document(args.old), load_document(args.new)
    sig, fragment, exceptions = merge_documents(old, new)
    bound = _bound(args, cfg, old, new)
    from .core import default_bound
    system = build_system(old.logic, sig, bound if bound is not None else default_bound(), fragment)
    rel = _relaxation(args, cfg, system, old.sentences, new.sentences, exceptions)
    config = RevisionConfig(
        rel,
        mode=args.mode or cfg.mode,
        max_cap=args.max_cap if args.max_cap is not None else cfg.max_cap,
        allow_non_exhaustive=bool(args.allow_non_exhaustive or cfg.allow_non_exhaustive),
    )
    result = revise(system, old.sentences, new.sentences, config)
    payload = {"system": system.describe(), "operator": rel.name, **result.to_json(system)}
    lines = [f"vector: {payload['vector']}  mode: {payload['mode']}"]
    if payload["flags"]:
        lines.append(f"flags: {', '.join(payload['flags'])}")
    lines += payload["revised"]
    return payload, lines


def cmd_check_agm(args, cfg):
    from .agm import POSTULATES, check_postulates, pl_corpus
    from .logics.pl import PLSystem
    from .operators import make_relaxation
    from .revision import RevisionConfig, RevisionOperator
    logic = str(cfg.agm.get("logic", "PL")).upper()
    if logic != "PL":
        raise RelaxrevError("check-agm enumerates propositional corpora; set [agm] logic = \"PL\"")
    n = args.atoms if args.atoms is not None else int(cfg.agm.get("atoms", 1))
    size = args.sentences if args.sentences is not None else int(cfg.agm.get("sentences", 2))
    depth = args.depth if args.depth is not None else int(cfg.agm.get("depth", 2))
    if not 1 <= n <= 3 or size < 0 or depth < 0:
        raise UsageError("--atoms must be 1..3; --sentences and --depth non-negative")
    atoms = ("p", "q", "r")[:n]
    system = PLSystem(atoms)
    name = args.op if getattr(args, "op", None) else cfg.operator
    if not name:
        raise UsageError("the operator config must set [operator] name")
    rel = make_relaxation(name, system, cfg.operator_params())
    op = RevisionOperator(system, RevisionConfig(rel, mode=cfg.mode, max_cap=cfg.max_cap,
                                                 allow_non_exhaustive=cfg.allow_non_exhaustive))
    corpus = pl_corpus(atoms, depth, size)
    report = check_postulates(system, op, corpus, POSTULATES)
    payload = {
        "system": system.describe(),
        "operator": rel.name,
        "mode": cfg.mode,
        "corpus": {"atoms": list(atoms), "depth": depth, "max_sentences": size, "kbs": len(corpus)},
        **report.to_json(system),
    }
    lines = [f"{len(corpus)} knowledge bases over {', '.join(atoms)}; {rel.name}, {cfg.mode}"]
    for r in report.results.values():
        lines.append(f"{r.postulate:4} {r.status:7} {r.checked - r.failed}/{r.checked}")
    return payload, lines


COMMANDS = {
    "models": cmd_models,
    "consistent": cmd_consistent,
    "entails": cmd_entails,
    "relax": cmd_relax,
    "revise": cmd_revise,
    "check-agm": cmd_check_agm,
}


# ---------------------------------------------------------------------------
# driver


def _emit_error(fmt: str, kind: str, message: str, code: int, err: TextIO, **extra) -> int:
    if fmt == "json":
        body = {"schema": SCHEMA, "error": {"kind": kind, "message": message, **extra}}
        err.write(json.dumps(body, sort_keys=True) + "\n")
    else:
        err.write(f"error: {message}\n")
    return code


def _requested_format(argv: Sequence[str]) -> str:
    for i, a in enumerate(argv):
        if a == "--format" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--format="):
            return a.split("=", 1)[1]
    return "json"


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    fmt = _requested_format(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _emit_error(fmt, "usage", str(exc), EXIT_USAGE, err)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        fmt = args.format or cfg.output or "json"
        payload, lines = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        return _emit_error(fmt, "usage", str(exc), EXIT_USAGE, err)
    except ParseError as exc:
        return _emit_error(fmt, "parse", str(exc), EXIT_INPUT, err,
                           line=exc.line, column=exc.column)
    except SignatureError as exc:
        return _emit_error(fmt, "signature", str(exc), EXIT_INPUT, err)
    except OSError as exc:
        return _emit_error(fmt, "io", f"{exc.filename}: {exc.strerror}", EXIT_INPUT, err)
    except RevisionFailed as exc:
        return _emit_error(fmt, "revision_failed", str(exc), EXIT_SEMANTIC, err,
                           frontier=list(exc.frontier))
    except RelaxrevError as exc:
        return _emit_error(fmt, type(exc).__name__, str(exc), EXIT_SEMANTIC, err)
    if fmt == "json":
        body = {"schema": SCHEMA, "command": args.command, **payload}
        out.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
