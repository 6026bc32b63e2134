"""Brute-force Tarskian model checking for the full sentence language.

Everything is evaluated exhaustively: first-order quantifiers loop over the
universe, second-order quantifiers loop over all 2^(n^a) relations, and the
fixpoint operators iterate stage by stage.  A sentence is first compiled
into nested closures over slot-indexed environments (one pass of structural
recursion), after which the same checker can be run against any number of
structures; models() is the compile-and-run convenience wrapper.

Characteristic leaves delegate to the decision procedures in charsets under
a recursion budget, since decoded payloads are untrusted and may nest
further leaves.  Callers are expected to hand in sentences that are
well-formed over the structure's vocabulary (see logic.validate_sentence);
the evaluator itself does not re-validate on every call.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import Structure, Vocabulary, enumerate_structures
from .logic import (
    And, Bit, CHAR_NODES, Eq, Exists, Forall, Formula, Lfp, Lt, Neq, Not,
    Or, Pfp, Rel, SOExists, SOForall, Tc, psi_recognize,
)


class PositivityViolation(ValueError):
    pass


class RecursionBudgetExhausted(RuntimeError):
    pass


class MissingDistinguished(ValueError):
    """A characteristic leaf needs a distinguished sentence that is not configured."""


@dataclass(frozen=True)
class EvalConfig:
    """Ambient configuration for characteristic-leaf evaluation.

    upsilon_ord is the distinguished sentence over {R:1, <} used by ordered
    leaves; upsilon_unord the one over {R:2} used by unordered leaves.
    """

    upsilon_ord: Formula | None = None
    upsilon_unord: Formula | None = None
    char_budget: int = 8


_EMPTY_CONFIG = EvalConfig()


class _Ctx:
    __slots__ = ("universe", "rel", "renv", "structure", "budget", "config")

    def __init__(self, structure: Structure, config: EvalConfig):
        self.universe = range(structure.n)
        self.rel = structure.rel
        self.renv: dict[str, frozenset] = {}
        self.structure = structure
        self.budget = config.char_budget
        self.config = config


def _positive_in(f: Formula, name: str, polarity: bool = True) -> bool:
    if isinstance(f, Rel):
        return polarity or f.name != name
    if isinstance(f, Not):
        return _positive_in(f.sub, name, not polarity)
    if isinstance(f, (And, Or)):
        return (_positive_in(f.left, name, polarity)
                and _positive_in(f.right, name, polarity))
    if isinstance(f, (Exists, Forall, Tc)):
        return _positive_in(f.sub, name, polarity)
    if isinstance(f, (SOExists, SOForall, Lfp, Pfp)):
        if f.relvar == name:
            return True
        return _positive_in(f.sub, name, polarity)
    return True


def _compile(f: Formula, slots: dict[str, int], so_bound: frozenset[str],
             state: dict):
    """Structural recursion into a closure run(ctx, env) -> bool."""
    t = type(f)
    if t is Rel:
        name = f.name
        if name in so_bound:
            if len(f.args) == 2:
                i, j = slots[f.args[0]], slots[f.args[1]]
                return lambda ctx, env: (env[i], env[j]) in ctx.renv[name]
            idx = tuple(slots[v] for v in f.args)
            return lambda ctx, env: tuple(env[i] for i in idx) in ctx.renv[name]
        if len(f.args) == 2:
            i, j = slots[f.args[0]], slots[f.args[1]]
            return lambda ctx, env: (env[i], env[j]) in ctx.rel[name]
        if len(f.args) == 1:
            i = slots[f.args[0]]
            return lambda ctx, env: (env[i],) in ctx.rel[name]
        idx = tuple(slots[v] for v in f.args)
        return lambda ctx, env: tuple(env[i] for i in idx) in ctx.rel[name]
    if t is Eq:
        i, j = slots[f.left], slots[f.right]
        return lambda ctx, env: env[i] == env[j]
    if t is Neq:
        i, j = slots[f.left], slots[f.right]
        return lambda ctx, env: env[i] != env[j]
    if t is Lt:
        i, j = slots[f.left], slots[f.right]
        return lambda ctx, env: env[i] < env[j]
    if t is Bit:
        i, j = slots[f.left], slots[f.right]
        return lambda ctx, env: (env[i] >> env[j]) & 1 == 1
    if t is And:
        left = _compile(f.left, slots, so_bound, state)
        right = _compile(f.right, slots, so_bound, state)
        return lambda ctx, env: left(ctx, env) and right(ctx, env)
    if t is Or:
        left = _compile(f.left, slots, so_bound, state)
        right = _compile(f.right, slots, so_bound, state)
        return lambda ctx, env: left(ctx, env) or right(ctx, env)
    if t is Not:
        sub = _compile(f.sub, slots, so_bound, state)
        return lambda ctx, env: not sub(ctx, env)
    if t is Exists or t is Forall:
        # Encoding sentences are identically false but carry one quantifier
        # per code bit; expanding them would cost n^|code| loops.
        if psi_recognize(f) is not None:
            return lambda ctx, env: False
        slot = len(slots)
        state["slots"] = max(state["slots"], slot + 1)
        sub = _compile(f.sub, {**slots, f.var: slot}, so_bound, state)
        if t is Exists:
            def run_exists(ctx, env):
                for value in ctx.universe:
                    env[slot] = value
                    if sub(ctx, env):
                        return True
                return False
            return run_exists

        def run_forall(ctx, env):
            for value in ctx.universe:
                env[slot] = value
                if not sub(ctx, env):
                    return False
            return True
        return run_forall
    if t is SOExists or t is SOForall:
        name, arity = f.relvar, f.arity
        sub = _compile(f.sub, slots, so_bound | {name}, state)
        want = t is SOExists

        def run_so(ctx, env):
            tuples = list(itertools.product(ctx.universe, repeat=arity))
            renv = ctx.renv
            saved = renv.get(name)
            result = not want
            for mask in range(1 << len(tuples)):
                renv[name] = frozenset(
                    tup for i, tup in enumerate(tuples) if mask >> i & 1
                )
                if sub(ctx, env) == want:
                    result = want
                    break
            if saved is None:
                del renv[name]
            else:
                renv[name] = saved
            return result
        return run_so
    if t is Tc:
        slot1, slot2 = len(slots), len(slots) + 1
        state["slots"] = max(state["slots"], slot2 + 1)
        sub = _compile(f.sub, {**slots, f.var1: slot1, f.var2: slot2},
                       so_bound, state)
        arg1, arg2 = slots[f.arg1], slots[f.arg2]

        def run_tc(ctx, env):
            universe = ctx.universe
            n = len(universe)
            reach = [[False] * n for _ in universe]
            for u in universe:
                env[slot1] = u
                row = reach[u]
                for v in universe:
                    env[slot2] = v
                    row[v] = sub(ctx, env)
                row[u] = True
            for k in universe:
                row_k = reach[k]
                for u in universe:
                    if reach[u][k]:
                        row_u = reach[u]
                        for v in universe:
                            if row_k[v]:
                                row_u[v] = True
            return reach[env[arg1]][env[arg2]]
        return run_tc
    if t is Lfp or t is Pfp:
        if t is Lfp and not _positive_in(f.sub, f.relvar):
            raise PositivityViolation(
                f"{f.relvar} occurs negatively under its least fixpoint"
            )
        name = f.relvar
        base = len(slots)
        var_slots = list(range(base, base + len(f.vars)))
        state["slots"] = max(state["slots"], base + len(f.vars))
        inner = dict(slots)
        inner.update(zip(f.vars, var_slots))
        sub = _compile(f.sub, inner, so_bound | {name}, state)
        arg_slots = tuple(slots[v] for v in f.args)
        least = t is Lfp

        def run_fp(ctx, env):
            tuples = list(itertools.product(ctx.universe, repeat=len(var_slots)))
            renv = ctx.renv
            saved = renv.get(name)

            def stage(current):
                renv[name] = current
                out = set()
                for tup in tuples:
                    for slot, value in zip(var_slots, tup):
                        env[slot] = value
                    if sub(ctx, env):
                        out.add(tup)
                return frozenset(out)

            current = frozenset()
            if least:
                while True:
                    nxt = stage(current)
                    if nxt == current:
                        break
                    current = nxt
            else:
                seen = {current}
                for _ in range(1 << len(tuples)):
                    nxt = stage(current)
                    if nxt == current:
                        break
                    if nxt in seen:
                        current = frozenset()
                        break
                    seen.add(nxt)
                    current = nxt
                else:
                    current = frozenset()
            if saved is None:
                del renv[name]
            else:
                renv[name] = saved
            return tuple(env[i] for i in arg_slots) in current
        return run_fp
    if t in CHAR_NODES:
        def run_char(ctx, env):
            if ctx.budget <= 0:
                raise RecursionBudgetExhausted(
                    "nested characteristic leaves exceeded the recursion budget"
                )
            from . import charsets

            return charsets.eval_char(ctx.structure, f, ctx.config,
                                      ctx.budget - 1)
        return run_char
    raise TypeError(f"cannot evaluate {f!r}")


@lru_cache(maxsize=512)
def _checker(f: Formula, config: EvalConfig):
    state = {"slots": 0}
    run = _compile(f, {}, frozenset(), state)
    width = state["slots"]

    def check(a: Structure) -> bool:
        return run(_Ctx(a, config), [None] * width)

    return check


def sentence_checker(f: Formula, config: EvalConfig | None = None):
    """Compile a sentence once; the result maps structures to verdicts."""
    return _checker(f, config or _EMPTY_CONFIG)


def models(a: Structure, f: Formula, config: EvalConfig | None = None) -> bool:
    """Does the structure satisfy the sentence?"""
    return _checker(f, config or _EMPTY_CONFIG)(a)


def valid_upto(f: Formula, vocab: Vocabulary, n_max: int,
               config: EvalConfig | None = None) -> Structure | None:
    """First structure of size <= n_max falsifying f, or None if f holds on all."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    check = sentence_checker(f, config)
    for a in enumerate_structures(vocab, n_max):
        if not check(a):
            return a
    return None


def mod_eq_upto(f: Formula, g: Formula, vocab: Vocabulary, n_max: int,
                config: EvalConfig | None = None) -> Structure | None:
    """First structure of size <= n_max where the two sentences disagree."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    check_f = sentence_checker(f, config)
    check_g = sentence_checker(g, config)
    for a in enumerate_structures(vocab, n_max):
        if check_f(a) != check_g(a):
            return a
    return None
