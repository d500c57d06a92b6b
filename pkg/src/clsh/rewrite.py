"""First-order rewriting over applicative terms.

Rules are atom-headed, left-linear patterns with variables as metavariables,
written `name: LHS => RHS`.  Reduction is weak: lambda bodies are never
rewritten, a Lam node is simply a value.  Two strategies are provided:

  lo  leftmost-outermost: preorder scan (node, then function subtree, then
      argument subtree), first match fires, rules tried in catalog order
  ri  rightmost-innermost: postorder scan, argument subtree first

normalize() is the plain rescan-from-the-root loop and records a full trace;
it is the specification of both strategies.  normalize_fast() runs a zipper
machine that avoids rescans and must agree with normalize() step for step,
which the test suite checks on random terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .syntax import SyntaxConfig, DEFAULT_SYNTAX, format_term, parse
from .terms import (
    App,
    Atom,
    Lam,
    Position,
    Term,
    Var,
    alpha_eq,
    pos_to_str,
    positions,
    replace_at,
    spine,
    term_size,
)

DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_SIZE = 1_000_000

NORMAL_FORM = "normal_form"
BUDGET_EXHAUSTED = "budget_exhausted"


class IllFormedRuleError(ValueError):
    """Raised for rules the engine cannot run: variable-headed or nonlinear
    left sides, right sides with unbound variables, lambdas on either side."""


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Term
    rhs: Term
    head: str
    arity: int
    metavars: frozenset[str]

    def __str__(self):
        return f"{self.name}: {format_term(self.lhs)} => {format_term(self.rhs)}"


def _pattern_vars(t: Term, acc: list[str]):
    match t:
        case Var(n):
            acc.append(n)
        case App(f, a):
            _pattern_vars(f, acc)
            _pattern_vars(a, acc)


def _has_lam(t: Term) -> bool:
    return any(type(s) is Lam for _, s in positions(t))


def _depth(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + max(_depth(f), _depth(a))
        case _:
            return 0


def make_rule(name: str, lhs: Term, rhs: Term) -> RewriteRule:
    if _has_lam(lhs) or _has_lam(rhs):
        raise IllFormedRuleError(f"rule {name}: lambdas are not allowed in rules")
    head, args = spine(lhs)
    if type(head) is not Atom:
        raise IllFormedRuleError(f"rule {name}: left side must be headed by an atom")
    occs: list[str] = []
    _pattern_vars(lhs, occs)
    if len(occs) != len(set(occs)):
        dup = sorted({v for v in occs if occs.count(v) > 1})
        raise IllFormedRuleError(
            f"rule {name}: left side is not linear, {', '.join(dup)} repeats")
    rvars: list[str] = []
    _pattern_vars(rhs, rvars)
    loose = sorted(set(rvars) - set(occs))
    if loose:
        raise IllFormedRuleError(
            f"rule {name}: right side uses unbound {', '.join(loose)}")
    return RewriteRule(name, lhs, rhs, head.name, len(args), frozenset(occs))


def parse_rule(line: str, lineno: int = 0) -> RewriteRule:
    where = f" on line {lineno}" if lineno else ""
    name, colon, rest = line.partition(":")
    name = name.strip()
    if not colon or not name.isidentifier():
        raise IllFormedRuleError(f"expected 'name: LHS => RHS'{where}")
    lhs_src, arrow, rhs_src = rest.partition("=>")
    if not arrow:
        raise IllFormedRuleError(f"rule {name}{where}: missing '=>'")
    return make_rule(name, parse(lhs_src), parse(rhs_src))


def parse_rules(text: str) -> list[RewriteRule]:
    """Parse a rule catalog: one rule per line, # starts a comment."""
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rules.append(parse_rule(line, lineno))
    return rules


@dataclass(frozen=True)
class RuleSet:
    """An ordered rule catalog with the derived indexes the machines need.

    Earlier rules win when several match at the same position.  At any one
    node at most one (head, arity) bucket can apply, since the head atom sits
    at the bottom of the application spine.
    """
    rules: tuple[RewriteRule, ...]
    _by_head_arity: dict = field(init=False, repr=False, compare=False)
    _max_arity: int = field(init=False, repr=False, compare=False)
    window: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(names) != len(set(names)):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise IllFormedRuleError(f"duplicate rule names: {', '.join(dup)}")
        index: dict[tuple[str, int], list[RewriteRule]] = {}
        for r in self.rules:
            index.setdefault((r.head, r.arity), []).append(r)
        object.__setattr__(self, "_by_head_arity",
                           {k: tuple(v) for k, v in index.items()})
        object.__setattr__(self, "_max_arity",
                           max((r.arity for r in self.rules), default=0))
        object.__setattr__(self, "window",
                           max((_depth(r.lhs) for r in self.rules), default=0))

    def __iter__(self) -> Iterator[RewriteRule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def extend(self, *more: RewriteRule) -> "RuleSet":
        return RuleSet(self.rules + tuple(more))

    def match_at(self, node: Term) -> Optional[tuple[RewriteRule, dict[str, Term]]]:
        """First rule (catalog order) whose left side matches at this node,
        with its substitution, or None."""
        cur = node
        d = 0
        while True:
            if type(cur) is Atom:
                for rule in self._by_head_arity.get((cur.name, d), ()):
                    sigma = match(rule.lhs, node)
                    if sigma is not None:
                        return rule, sigma
                return None
            if type(cur) is App and d < self._max_arity:
                cur = cur.fun
                d += 1
                continue
            return None


def match(pattern: Term, term: Term) -> Optional[dict[str, Term]]:
    """Match an atom-headed, lambda-free pattern against a term.  Every
    pattern variable binds; returns the substitution or None."""
    sigma: dict[str, Term] = {}
    stack = [(pattern, term)]
    while stack:
        p, s = stack.pop()
        match p:
            case Var(n):
                prev = sigma.get(n)
                if prev is None:
                    sigma[n] = s
                elif not alpha_eq(prev, s):
                    return None
            case Atom(n):
                if type(s) is not Atom or s.name != n:
                    return None
            case App(pf, pa):
                if type(s) is not App:
                    return None
                stack.append((pf, s.fun))
                stack.append((pa, s.arg))
            case _:
                return None
    return sigma


def instantiate(template: Term, sigma: dict[str, Term]) -> Term:
    match template:
        case Var(n):
            return sigma[n]
        case Atom(_):
            return template
        case App(f, a):
            return App(instantiate(f, sigma), instantiate(a, sigma))
        case _:
            raise IllFormedRuleError("lambda in rule template")


# ---------------------------------------------------------------------------
# built-in catalogs

_BASE_SRC = """
I: I a => a
K: K a b => a
S: S a b c => a c (b c)
"""

# Delta rules for the derived combinators, one per definition.  B2 has no
# rule of its own: the parser expands the token to B B B.
_DERIVED_SRC = """
B: B x y z => x (y z)
C: C x y z => x z y
D: D x y r => r x y
Phi: Phi x y z w => x (y w) (z w)
Psi: Psi x y z w => x (y z) (y w)
C2: C2 x y z w => x w y z
Curry: Curry h x y => h (D x y)
p: p (D x y) => x
q: q (D x y) => y
eps: eps z => z I
Fork: Fork f g t => D (f t) (g t)
Comp: Comp f g x => f (g x)
"""

CL_BASE = RuleSet(tuple(parse_rules(_BASE_SRC)))
DERIVED = RuleSet(tuple(parse_rules(_DERIVED_SRC)))
FULL = CL_BASE.extend(*DERIVED.rules)


# ---------------------------------------------------------------------------
# traces

@dataclass(frozen=True)
class TraceStep:
    rule: str
    pos: Position
    dir: str  # "->" forward, "<-" when replaying a derivation backwards
    result: Term

    def to_json(self, cfg: SyntaxConfig = DEFAULT_SYNTAX) -> dict:
        return {
            "rule": self.rule,
            "pos": pos_to_str(self.pos),
            "dir": self.dir,
            "result": format_term(self.result, cfg),
        }


@dataclass(frozen=True)
class Trace:
    initial: Term
    steps: tuple[TraceStep, ...]
    status: str  # NORMAL_FORM or BUDGET_EXHAUSTED
    final: Term

    @property
    def nsteps(self) -> int:
        return len(self.steps)

    def to_json(self, cfg: SyntaxConfig = DEFAULT_SYNTAX) -> dict:
        return {
            "initial": format_term(self.initial, cfg),
            "steps": [s.to_json(cfg) for s in self.steps],
            "status": self.status,
            "final": format_term(self.final, cfg),
        }


# ---------------------------------------------------------------------------
# reference engine: rescan from the root after every step

def _ri_positions(t: Term) -> Iterator[tuple[Position, Term]]:
    """Postorder, argument subtree before function subtree; lambda bodies
    are skipped."""
    stack: list[tuple[Position, Term, bool]] = [((), t, False)]
    while stack:
        pos, node, expanded = stack.pop()
        if expanded or type(node) is not App:
            yield pos, node
        else:
            stack.append((pos, node, True))
            stack.append((pos + ("fun",), node.fun, False))
            stack.append((pos + ("arg",), node.arg, False))


def reduce_step(t: Term, rules: RuleSet,
                strategy: str = "lo") -> Optional[tuple[str, Position, Term]]:
    """One step: (rule name, position, whole rewritten term), or None if t
    is in normal form."""
    if strategy == "lo":
        scan = positions(t, into_lam=False)
    elif strategy == "ri":
        scan = _ri_positions(t)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    for pos, sub in scan:
        m = rules.match_at(sub)
        if m is not None:
            rule, sigma = m
            return rule.name, pos, replace_at(t, pos, instantiate(rule.rhs, sigma))
    return None


def normalize(t: Term, rules: RuleSet, max_steps: int = DEFAULT_MAX_STEPS,
              strategy: str = "lo", max_size: int = DEFAULT_MAX_SIZE) -> Trace:
    """Normalize by iterated reduce_step, recording every step.  Stops with
    BUDGET_EXHAUSTED when max_steps reductions have fired and a redex is
    still present, or when the term outgrows max_size nodes."""
    steps: list[TraceStep] = []
    cur = t
    while True:
        m = reduce_step(cur, rules, strategy)
        if m is None:
            status = NORMAL_FORM
            break
        if len(steps) >= max_steps:
            status = BUDGET_EXHAUSTED
            break
        name, pos, cur = m
        steps.append(TraceStep(name, pos, "->", cur))
        if term_size(cur) > max_size:
            status = BUDGET_EXHAUSTED
            break
    return Trace(initial=t, steps=tuple(steps), status=status, final=cur)


# ---------------------------------------------------------------------------
# fast engine: zipper machines, no trace

def _machine_lo(t: Term, rules: RuleSet, max_steps: int,
                max_size: int) -> tuple[Term, int, str]:
    """Leftmost-outermost without rescans.

    A fire can only enable new redexes inside the contractum or at ancestors
    whose pattern window reaches the changed node, so after each step the
    machine rechecks at most rules.window enclosing nodes (outermost first)
    and otherwise resumes at the contractum.  Subtrees known to be redex-free
    are remembered by identity and never rescanned; that is sound because
    having a redex is a property of the subtree alone.
    """
    seen: dict[int, Term] = {}
    frames: list[tuple[int, Term]] = []  # (0, arg) descended into fun; (1, fun) into arg
    focus = t
    down = True
    nsteps = 0
    total = term_size(t)
    window = rules.window

    def zip_all(f: Term) -> Term:
        for kind, sib in reversed(frames):
            f = App(f, sib) if kind == 0 else App(sib, f)
        return f

    while True:
        if down:
            if id(focus) in seen:
                down = False
                continue
            m = rules.match_at(focus)
            if m is None:
                if type(focus) is App:
                    frames.append((0, focus.arg))
                    focus = focus.fun
                else:
                    seen[id(focus)] = focus
                    down = False
                continue
            rule, sigma = m
            while True:  # fire, then chase re-enabled ancestors
                if nsteps >= max_steps:
                    return zip_all(focus), nsteps, BUDGET_EXHAUSTED
                contractum = instantiate(rule.rhs, sigma)
                nsteps += 1
                total += term_size(contractum) - term_size(focus)
                focus = contractum
                if total > max_size:
                    return zip_all(focus), nsteps, BUDGET_EXHAUSTED
                k = min(window, len(frames))
                if k == 0:
                    break
                popped = frames[-k:]
                del frames[-k:]
                anc: list[Term] = []  # anc[i] rebuilt from the innermost i+1 frames
                cur = focus
                for kind, sib in reversed(popped):
                    cur = App(cur, sib) if kind == 0 else App(sib, cur)
                    anc.append(cur)
                hit = None
                for j in range(k - 1, -1, -1):  # outermost candidate first
                    mm = rules.match_at(anc[j])
                    if mm is not None:
                        hit = j, mm
                        break
                if hit is None:
                    frames.extend(popped)
                    break
                j, (rule, sigma) = hit
                frames.extend(popped[:k - 1 - j])
                focus = anc[j]
            # no enclosing redex: scan the contractum
        else:
            if not frames:
                return focus, nsteps, NORMAL_FORM
            kind, sib = frames.pop()
            if kind == 0:
                frames.append((1, focus))
                focus = sib
                down = True
            else:
                node = App(sib, focus)
                seen[id(node)] = node
                focus = node


_MK = ("mk",)


def _machine_ri(t: Term, rules: RuleSet, max_steps: int,
                max_size: int) -> tuple[Term, int, str]:
    """Rightmost-innermost: evaluate the argument, then the function, then
    fire at the node.  Finished subtrees are remembered by identity, so the
    already-normal pieces a contractum reuses are not rescanned."""
    seen: dict[int, Term] = {}
    ws: list = [("eval", t)]
    vs: list[Term] = []
    nsteps = 0
    total = term_size(t)

    def rebuild(hole: Term) -> Term:
        vals = vs + [hole]
        while ws:
            op = ws.pop()
            if op is _MK:
                f = vals.pop()
                a = vals.pop()
                vals.append(App(f, a))
            else:
                vals.append(op[1])
        assert len(vals) == 1
        return vals[0]

    def fire(node: Term, m) -> Optional[Term]:
        """Returns the contractum, or None when stopping; the caller returns
        the rebuilt whole term."""
        nonlocal nsteps, total
        rule, sigma = m
        if nsteps >= max_steps:
            return None
        c = instantiate(rule.rhs, sigma)
        nsteps += 1
        total += term_size(c) - term_size(node)
        return c

    while ws:
        op = ws.pop()
        if op is _MK:
            f = vs.pop()
            a = vs.pop()
            node = App(f, a)
            m = rules.match_at(node)
            if m is None:
                seen[id(node)] = node
                vs.append(node)
                continue
            c = fire(node, m)
            if c is None:
                return rebuild(node), nsteps, BUDGET_EXHAUSTED
            if total > max_size:
                return rebuild(c), nsteps, BUDGET_EXHAUSTED
            ws.append(("eval", c))
        else:
            node = op[1]
            if id(node) in seen or type(node) is Lam:
                seen[id(node)] = node
                vs.append(node)
            elif type(node) is App:
                ws.append(_MK)
                ws.append(("eval", node.fun))
                ws.append(("eval", node.arg))
            else:
                m = rules.match_at(node)
                if m is None:
                    seen[id(node)] = node
                    vs.append(node)
                    continue
                c = fire(node, m)
                if c is None:
                    return rebuild(node), nsteps, BUDGET_EXHAUSTED
                if total > max_size:
                    return rebuild(c), nsteps, BUDGET_EXHAUSTED
                ws.append(("eval", c))
    assert len(vs) == 1
    return vs[0], nsteps, NORMAL_FORM


def normalize_fast(t: Term, rules: RuleSet, max_steps: int = DEFAULT_MAX_STEPS,
                   strategy: str = "lo",
                   max_size: int = DEFAULT_MAX_SIZE) -> tuple[Term, int, str]:
    """Like normalize() but via the zipper machines, returning
    (final term, steps fired, status) without a trace."""
    if strategy == "lo":
        return _machine_lo(t, rules, max_steps, max_size)
    if strategy == "ri":
        return _machine_ri(t, rules, max_steps, max_size)
    raise ValueError(f"unknown strategy {strategy!r}")
