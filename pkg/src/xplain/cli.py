"""Command-line front end over the JSON interchange format.

Subcommands: explain (sufficient-reasons | relevant | necessary |
hypergraph), score, useful, equiv, oracle, validate. Reports are plain
text or canonical JSON (--output json); JSON reports round-trip
byte-identically. Exit codes: 0 success, 1 oracle mismatch or internal
error, 2 validation-class failure, 3 budget exceeded, 4 parse error.
The XPLAIN_BUDGET environment variable overrides every default budget;
--budget overrides the environment.
"""

import argparse
import os
import sys

from . import necessity, oracle, relevance, usefulness
from .cnf import CnfFormula
from .errors import BudgetExceeded, ParseError, ValidationError, XplainError
from .fbdd import Fbdd
from .jsonio import (
    canonical_dumps,
    load_entity_file,
    load_model_file,
)
from .reasons import reason_hypergraph
from .tree import DecisionTree
from .validate import validate


class _OracleMismatch(Exception):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


def _budgets(args):
    """(search budget, oracle budget) from --budget / XPLAIN_BUDGET."""
    raw = args.budget
    if raw is None:
        raw = os.environ.get("XPLAIN_BUDGET")
        if raw is not None:
            try:
                raw = int(raw)
            except ValueError as err:
                raise ParseError(f"XPLAIN_BUDGET must be an integer, got {raw!r}") from err
    if raw is None:
        return None, oracle.DEFAULT_BUDGET
    return raw, oracle.OracleBudget(max_entities=raw, max_subsets=raw)


def _load_checked(path):
    space, model = load_model_file(path)
    report = validate(model)
    if not report.ok:
        details = "; ".join(f.message for f in report.findings)
        raise ValidationError(f"{path} failed validation: {details}")
    return space, model


def _sorted_feature_sets(space, sets):
    order = {name: i for i, name in enumerate(space.names)}
    cooked = [sorted(s, key=order.__getitem__) for s in sets]
    cooked.sort(key=lambda names: (len(names), [order[n] for n in names]))
    return cooked


def _enumerate_sufficient_reasons(model, entity, oracle_budget):
    if isinstance(model, (DecisionTree, CnfFormula)):
        rh = reason_hypergraph(model, entity)
        return oracle.enumerate_minimal_hitting_sets(rh.hypergraph, oracle_budget)
    return oracle.enumerate_sufficient_reasons(model, entity, oracle_budget)


def _cmd_sufficient_reasons(args, model, entity):
    _, oracle_budget = _budgets(args)
    reasons = _enumerate_sufficient_reasons(model, entity, oracle_budget)
    if args.oracle_check:
        brute = oracle.enumerate_sufficient_reasons(model, entity, oracle_budget)
        if brute != reasons:
            raise _OracleMismatch("sufficient reasons disagree with the oracle",
                                  {"fast": sorted(map(sorted, reasons)),
                                   "oracle": sorted(map(sorted, brute))})
    return {
        "prediction": model.evaluate(entity),
        "sufficient_reasons": _sorted_feature_sets(model.space, reasons),
    }


def _cmd_relevant(args, model, entity):
    search_budget, oracle_budget = _budgets(args)
    if isinstance(model, Fbdd):
        raise ValidationError(
            "relevancy for FBDDs has no fast algorithm here; use `xplain oracle relevant`"
        )
    if args.feature:
        answer = relevance.is_relevant(model, entity, args.feature, search_budget)
        if args.oracle_check:
            brute = oracle.brute_relevant(model, entity, args.feature, oracle_budget)
            if brute != answer.relevant:
                raise _OracleMismatch("relevancy disagrees with the oracle",
                                      {"fast": answer.relevant, "oracle": brute})
        witness = sorted(answer.witness, key=model.space.names.index) if answer.witness else None
        return {"feature": args.feature, "relevant": answer.relevant, "witness": witness}
    names = relevance.all_relevant(model, entity)
    if args.oracle_check:
        brute = {
            f for f in model.space.names
            if oracle.brute_relevant(model, entity, f, oracle_budget)
        }
        if brute != set(names):
            raise _OracleMismatch("relevant set disagrees with the oracle",
                                  {"fast": sorted(names), "oracle": sorted(brute)})
    return {"relevant": [n for n in model.space.names if n in names]}


def _cmd_necessary(args, model, entity):
    _, oracle_budget = _budgets(args)
    if args.feature:
        answer = necessity.is_necessary(model, entity, args.feature)
        if args.oracle_check:
            brute = oracle.brute_necessary(model, entity, args.feature, oracle_budget)
            if brute != answer:
                raise _OracleMismatch("necessity disagrees with the oracle",
                                      {"fast": answer, "oracle": brute})
        return {"feature": args.feature, "necessary": answer}
    names = necessity.all_necessary(model, entity)
    if args.oracle_check:
        brute = {
            f for f in model.space.names
            if oracle.brute_necessary(model, entity, f, oracle_budget)
        }
        if brute != set(names):
            raise _OracleMismatch("necessary set disagrees with the oracle",
                                  {"fast": sorted(names), "oracle": sorted(brute)})
    return {"necessary": [n for n in model.space.names if n in names]}


def _cmd_hypergraph(args, model, entity):
    rh = reason_hypergraph(model, entity)
    order = {name: i for i, name in enumerate(model.space.names)}
    edges = [
        {"features": sorted(edge, key=order.__getitem__), "clauses": list(clauses)}
        for edge, clauses in zip(rh.hypergraph.edges, rh.provenance)
    ]
    return {"nodes": list(model.space.names), "edges": edges}


def _cmd_score(args, model):
    _, oracle_budget = _budgets(args)
    if not isinstance(model, DecisionTree):
        raise ValidationError("scores are defined for decision-tree models")

    def row(score):
        return {
            "feature": score.feature,
            "necessary_count": score.necessary_count,
            "total_entities": score.total_entities,
        }

    if args.feature:
        score = usefulness.usefulness_score(model, args.feature)
        if args.oracle_check:
            brute = oracle.brute_score(model, args.feature, oracle_budget)
            if brute != score.necessary_count:
                raise _OracleMismatch("score disagrees with the oracle",
                                      {"fast": score.necessary_count, "oracle": brute})
        return {"scores": [row(score)]}
    scores, ranking = usefulness.score_all(model)
    scores = sorted(scores, key=lambda s: (-s.necessary_count, s.feature))
    if args.oracle_check:
        for score in scores:
            brute = oracle.brute_score(model, score.feature, oracle_budget)
            if brute != score.necessary_count:
                raise _OracleMismatch(
                    f"score of {score.feature!r} disagrees with the oracle",
                    {"feature": score.feature, "fast": score.necessary_count,
                     "oracle": brute})
    return {"scores": [row(s) for s in scores], "ranking": ranking}


def _cmd_useful(args, model):
    search_budget, oracle_budget = _budgets(args)
    conversion_budget = search_budget

    def check(feature, fast):
        if args.oracle_check:
            brute = oracle.brute_useful(model, feature, oracle_budget)
            if brute != fast:
                raise _OracleMismatch("usefulness disagrees with the oracle",
                                      {"feature": feature, "fast": fast, "oracle": brute})

    if args.feature:
        fast = usefulness.is_useful(model, args.feature, conversion_budget)
        check(args.feature, fast)
        return {"feature": args.feature, "useful": fast}
    out = []
    for name in model.space.names:
        fast = usefulness.is_useful(model, name, conversion_budget)
        check(name, fast)
        if fast:
            out.append(name)
    return {"useful": out}


def _cmd_equiv(args):
    search_budget, oracle_budget = _budgets(args)
    _, m1 = _load_checked(args.model)
    _, m2 = _load_checked(args.other_model)
    verdict = usefulness.equivalent(m1, m2, search_budget)
    if args.oracle_check:
        brute = oracle.brute_equivalent(m1, m2, oracle_budget)
        if brute != verdict:
            raise _OracleMismatch("equivalence disagrees with the oracle",
                                  {"fast": verdict, "oracle": brute})
    return {"equivalent": verdict}


def _cmd_validate(args):
    space, model = load_model_file(args.model)
    report = validate(model)
    body = report.to_dict()
    body["model_kind"] = model.kind_name
    return body, (0 if report.ok else 2)


def _cmd_oracle(args):
    _, oracle_budget = _budgets(args)
    space, model = _load_checked(args.model)
    sub = args.oracle_command
    if sub in ("sufficient-reasons", "relevant", "necessary", "mhs"):
        entity = load_entity_file(space, args.entity)
    if sub == "sufficient-reasons":
        reasons = oracle.enumerate_sufficient_reasons(model, entity, oracle_budget)
        return {"sufficient_reasons": _sorted_feature_sets(space, reasons)}
    if sub == "mhs":
        rh = reason_hypergraph(model, entity)
        sets = oracle.enumerate_minimal_hitting_sets(rh.hypergraph, oracle_budget)
        return {"minimal_hitting_sets": _sorted_feature_sets(space, sets)}
    if sub == "relevant":
        if args.feature:
            return {"feature": args.feature,
                    "relevant": oracle.brute_relevant(model, entity, args.feature, oracle_budget)}
        return {"relevant": [f for f in space.names
                             if oracle.brute_relevant(model, entity, f, oracle_budget)]}
    if sub == "necessary":
        if args.feature:
            return {"feature": args.feature,
                    "necessary": oracle.brute_necessary(model, entity, args.feature, oracle_budget)}
        return {"necessary": [f for f in space.names
                              if oracle.brute_necessary(model, entity, f, oracle_budget)]}
    if sub == "useful":
        if args.feature:
            return {"feature": args.feature,
                    "useful": oracle.brute_useful(model, args.feature, oracle_budget)}
        return {"useful": [f for f in space.names
                           if oracle.brute_useful(model, f, oracle_budget)]}
    if sub == "score":
        features = [args.feature] if args.feature else list(space.names)
        return {"scores": [
            {"feature": f, "necessary_count": oracle.brute_score(model, f, oracle_budget),
             "total_entities": space.entity_count()}
            for f in features
        ]}
    raise ParseError(f"unknown oracle subcommand {sub!r}")


def _human_lines(report):
    def fmt(value):
        if isinstance(value, bool):
            return "yes" if value else "no"
        if isinstance(value, list):
            return ", ".join(fmt(v) for v in value) if value else "(none)"
        if isinstance(value, dict):
            return "{" + ", ".join(f"{k}: {fmt(v)}" for k, v in value.items()) + "}"
        return str(value)

    lines = []
    for key, value in report.items():
        if key in ("sufficient_reasons", "minimal_hitting_sets"):
            lines.append(f"{key.replace('_', ' ')} ({len(value)}):")
            for reason in value:
                lines.append("  {" + ", ".join(reason) + "}")
        elif key == "scores":
            lines.append("scores:")
            for row in value:
                lines.append(
                    f"  {row['feature']}: {row['necessary_count']} / {row['total_entities']}"
                )
        elif key == "findings":
            lines.append(f"findings ({len(value)}):")
            for f in value:
                lines.append(f"  [{f['code']}] {f['message']}")
        elif key == "edges":
            lines.append(f"edges ({len(value)}):")
            for edge in value:
                lines.append("  {" + ", ".join(edge["features"]) + "}"
                             + f" from clauses {edge['clauses']}")
        else:
            lines.append(f"{key}: {fmt(value)}")
    return lines


def _emit(args, report, code=0):
    report = {"command": args.command_path, "ok": code == 0, **report}
    if args.output == "json":
        sys.stdout.write(canonical_dumps(report))
    else:
        for line in _human_lines(report):
            print(line)
    return code


def _emit_error(args, kind, message, code, extra=None):
    if args is not None and getattr(args, "output", "human") == "json":
        body = {"ok": False, "error": {"kind": kind, "message": message}}
        if extra:
            body["error"]["details"] = extra
        sys.stdout.write(canonical_dumps(body))
    else:
        print(f"error [{kind}]: {message}", file=sys.stderr)
    return code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("human", "json"), default="human",
                        help="report format (default: human)")
    common.add_argument("--budget", type=int, default=None,
                        help="candidate/entity budget for exponential searches")
    common.add_argument("--oracle-check", action="store_true",
                        help="re-run the query through the brute-force oracle and "
                             "fail on mismatch")

    parser = argparse.ArgumentParser(
        prog="xplain",
        description="Sufficient reasons, relevant/necessary features and "
                    "usefulness scores for tree, FBDD and CNF classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    explain = sub.add_parser("explain", help="entity-level explanation queries")
    explain_sub = explain.add_subparsers(dest="explain_command", required=True)
    for name in ("sufficient-reasons", "relevant", "necessary", "hypergraph"):
        p = explain_sub.add_parser(name, parents=[common])
        p.add_argument("model", help="model JSON file")
        p.add_argument("entity", help="entity JSON file")
        if name in ("relevant", "necessary"):
            p.add_argument("--feature", default=None,
                           help="query a single feature instead of all")

    score = sub.add_parser("score", parents=[common],
                           help="usefulness scores (categorical trees)")
    score.add_argument("model")
    group = score.add_mutually_exclusive_group()
    group.add_argument("--feature", default=None)
    group.add_argument("--all", action="store_true", default=True,
                       help="score every feature (default)")

    useful = sub.add_parser("useful", parents=[common],
                            help="global usefulness of features")
    useful.add_argument("model")
    useful.add_argument("--feature", default=None)

    equiv = sub.add_parser("equiv", parents=[common],
                           help="decide whether two models agree everywhere")
    equiv.add_argument("model")
    equiv.add_argument("other_model")

    val = sub.add_parser("validate", parents=[common],
                         help="structural validation report")
    val.add_argument("model")

    orc = sub.add_parser("oracle", help="brute-force reference queries")
    orc_sub = orc.add_subparsers(dest="oracle_command", required=True)
    for name in ("sufficient-reasons", "relevant", "necessary", "mhs"):
        p = orc_sub.add_parser(name, parents=[common])
        p.add_argument("model")
        p.add_argument("entity")
        if name in ("relevant", "necessary"):
            p.add_argument("--feature", default=None)
    for name in ("useful", "score"):
        p = orc_sub.add_parser(name, parents=[common])
        p.add_argument("model")
        p.add_argument("--feature", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "explain":
        args.command_path = f"explain {args.explain_command}"
    elif args.command == "oracle":
        args.command_path = f"oracle {args.oracle_command}"
    else:
        args.command_path = args.command
    try:
        if args.command == "explain":
            space, model = _load_checked(args.model)
            entity = load_entity_file(space, args.entity)
            handler = {
                "sufficient-reasons": _cmd_sufficient_reasons,
                "relevant": _cmd_relevant,
                "necessary": _cmd_necessary,
                "hypergraph": _cmd_hypergraph,
            }[args.explain_command]
            return _emit(args, handler(args, model, entity))
        if args.command == "score":
            _, model = _load_checked(args.model)
            return _emit(args, _cmd_score(args, model))
        if args.command == "useful":
            _, model = _load_checked(args.model)
            return _emit(args, _cmd_useful(args, model))
        if args.command == "equiv":
            return _emit(args, _cmd_equiv(args))
        if args.command == "validate":
            report, code = _cmd_validate(args)
            return _emit(args, report, code)
        if args.command == "oracle":
            return _emit(args, _cmd_oracle(args))
        raise ParseError(f"unknown command {args.command!r}")
    except _OracleMismatch as err:
        return _emit_error(args, "oracle-mismatch", str(err), 1, err.report)
    except ParseError as err:
        return _emit_error(args, "parse-error", str(err), 4)
    except BudgetExceeded as err:
        return _emit_error(args, "budget-exceeded", str(err), 3)
    except XplainError as err:
        return _emit_error(args, type(err).__name__, str(err), 2)


def run():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
