"""Compiling lambda abstractions into the I/K/S basis.

The translation is the classic three-case one, applied to the innermost
binder first:

    \\x.x        => I
    \\x.c        => K c          for a leaf c other than x
    \\x.M N      => S (\\x.M) (\\x.N)

No smarter clauses are used: an application is always split with S, even
when x occurs in only one side.  The one optional refinement is an eta
contraction (\\x.M x => M when x is not free in M), applied after the body
has been compiled and before the S split.

The same translation backs the derived combinator catalog: every derived
atom carries a lambda definition here, and define_as_ski() compiles it to a
pure I/K/S term, so the delta rules in rewrite.py can be cross-checked
against the basis instead of being trusted.
"""

from __future__ import annotations

from functools import cache

from .syntax import parse
from .terms import App, Atom, Lam, Term, Var, free_vars


class NestedLambdaError(ValueError):
    """compile_abstraction() got a body that still contains a lambda."""


class NoDefinitionError(KeyError):
    """The atom has no lambda definition to unfold."""


def compile_abstraction(x: str, body: Term) -> Term:
    """Eliminate one binder from a lambda-free body."""
    out: list[Term] = []
    work: list[tuple[Term, bool]] = [(body, False)]
    while work:
        node, combine = work.pop()
        if combine:
            a = out.pop()
            f = out.pop()
            out.append(App(App(Atom("S"), f), a))
            continue
        match node:
            case Var(n) if n == x:
                out.append(Atom("I"))
            case Var(_) | Atom(_):
                out.append(App(Atom("K"), node))
            case App(f, a):
                work.append((node, True))
                work.append((a, False))
                work.append((f, False))
            case Lam(_, _):
                raise NestedLambdaError(
                    "body still contains a lambda; eliminate inner binders first")
    return out[0]


def compile_term(t: Term, use_eta: bool = False) -> Term:
    """Replace every lambda in t by its I/K/S disassembly, innermost first.
    The result has no Lam nodes; variables that were free stay free."""
    match t:
        case Atom(_) | Var(_):
            return t
        case App(f, a):
            return App(compile_term(f, use_eta), compile_term(a, use_eta))
        case Lam(x, body):
            b = compile_term(body, use_eta)
            if (use_eta and type(b) is App and type(b.arg) is Var
                    and b.arg.name == x and x not in free_vars(b.fun)):
                return b.fun
            return compile_abstraction(x, b)
        case _:
            raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# lambda definitions of the derived combinators

# D is inlined as \r.r x y inside Curry and Fork so their compiled forms stay
# inside the pure basis.
_DEFS = {
    "B": r"\x y z. x (y z)",
    "C": r"\x y z. x z y",
    "D": r"\x y r. r x y",
    "Phi": r"\x y z w. x (y w) (z w)",
    "Psi": r"\x y z w. x (y z) (y w)",
    "C2": r"\x y z w. x w y z",
    "Curry": r"\h x y. h (\r. r x y)",
    "p": r"\z. z K",
    "q": r"\z. z (K I)",
    "eps": r"\z. z I",
    "Fork": r"\f g t r. r (f t) (g t)",
    "Comp": r"\f g x. f (g x)",
}

DERIVED_NAMES = frozenset(_DEFS) | {"B2"}

_BASIS = frozenset({"I", "K", "S"})


@cache
def lambda_definition(name: str) -> Term:
    """The defining term of a derived combinator, binders intact.  B2 is the
    one entry defined by an applicative expression (B B B) rather than an
    abstraction."""
    if name == "B2":
        return parse("B B B")
    src = _DEFS.get(name)
    if src is None:
        if name in _BASIS:
            raise NoDefinitionError(f"{name} is a basis combinator, not a derived one")
        raise NoDefinitionError(f"no lambda definition for atom {name!r}")
    return parse(src)


@cache
def define_as_ski(name: str) -> Term:
    """The I/K/S unfolding of a derived combinator.  B2 unfolds to B B B,
    everything else compiles straight from its lambda definition."""
    return compile_term(lambda_definition(name))


def expand_derived(t: Term) -> Term:
    """Replace every derived atom by its basis unfolding, recursively, so
    only I, K, S, and atoms without definitions remain."""
    match t:
        case Atom(n) if n in DERIVED_NAMES:
            return expand_derived(define_as_ski(n))
        case App(f, a):
            return App(expand_derived(f), expand_derived(a))
        case Lam(x, body):
            return Lam(x, expand_derived(body))
        case _:
            return t
