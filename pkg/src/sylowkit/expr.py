"""The group-expression language of the CLI.

LL(1) recursive descent over a hand-rolled lexer; integer literals only.
Classical-group literals (PSp(4,3), O+(2,5), U(3,4)), named constructions
(Q, D, C, S, P, Up, Sym, Antisym, Antisym0, AntisymStar), Syl(p, expr),
direct products with 'x' or '*', and model(entry-id; k=v, ...) referring
to catalog entries.  Parse errors carry the byte offset and the expected
token set; print(parse(t)) normalizes whitespace only.
"""

from dataclasses import dataclass

from .classical import FAMILIES, ClassicalSpec, build
from .errors import ExprError, Inapplicable
from .ff import ff_from_size

MAX_INPUT_BYTES = 4096

NAMED_ARITIES = {
    "Q": 1, "D": 1, "C": 1, "S": 1,
    "Up": 2, "Sym": 2, "Antisym": 2, "Antisym0": 2, "AntisymStar": 2,
}


@dataclass(frozen=True)
class Classical:
    family: str
    sign: str
    args: tuple[int, ...]

    def text(self):
        return f"{self.family}{self.sign}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Named:
    kind: str
    args: tuple[int, ...]

    def text(self):
        return f"{self.kind}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class PSyl:
    l: int
    n: int

    def text(self):
        return f"P({self.l}, S({self.n}))"


@dataclass(frozen=True)
class Syl:
    p: int
    inner: "Expr"

    def text(self):
        return f"Syl({self.p}, {self.inner.text()})"


@dataclass(frozen=True)
class Product:
    left: "Expr"
    right: "Expr"

    def text(self):
        return f"{self.left.text()} x {self.right.text()}"


@dataclass(frozen=True)
class Model:
    entry: str
    params: tuple[tuple[str, int | str], ...]

    def text(self):
        kv = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"model({self.entry}; {kv})"


Expr = Classical | Named | PSyl | Syl | Product | Model


# ---------------------------------------------------------------------------
# lexer

_SYMBOLS = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA", ";": "SEMI",
            "=": "EQ", "*": "TIMES", "+": "PLUS", "-": "MINUS"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def _lex(src: str) -> list[Token]:
    out = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(Token("INT", src[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(Token("NAME", src[i:j], i))
            i = j
            continue
        if c in _SYMBOLS:
            out.append(Token(_SYMBOLS[c], c, i))
            i += 1
            continue
        raise ExprError(f"unexpected character {c!r}", i, ("name", "integer", "symbol"))
    out.append(Token("EOF", "", n))
    return out


class _Parser:
    def __init__(self, src: str):
        if len(src.encode("utf-8")) > MAX_INPUT_BYTES:
            raise ExprError(f"input longer than {MAX_INPUT_BYTES} bytes", 0)
        self.toks = _lex(src)
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def take(self, kind: str, expected: tuple[str, ...] | None = None) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != kind:
            raise ExprError(
                f"got {tok.text!r}" if tok.text else "unexpected end of input",
                tok.offset, expected or (kind.lower(),),
            )
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        e = self.product()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ExprError(f"trailing input {tok.text!r}", tok.offset, ("'x'", "end of input"))
        return e

    def product(self) -> Expr:
        e = self.atom()
        while True:
            tok = self.peek()
            if tok.kind == "TIMES" or (tok.kind == "NAME" and tok.text == "x"):
                self.pos += 1
                e = Product(e, self.atom())
            else:
                return e

    def int_arg(self) -> int:
        return int(self.take("INT", ("integer",)).text)

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind != "NAME":
            raise ExprError(
                f"got {tok.text!r}" if tok.text else "unexpected end of input",
                tok.offset, ("group name", "'Syl'", "'model'"),
            )
        name = tok.text
        self.pos += 1
        if name == "Syl":
            self.take("LPAREN", ("'('",))
            p = self.int_arg()
            self.take("COMMA", ("','",))
            inner = self.product()
            self.take("RPAREN", ("')'",))
            return Syl(p, inner)
        if name == "model":
            return self.model_atom(tok)
        if name == "P":
            self.take("LPAREN", ("'('",))
            l = self.int_arg()
            self.take("COMMA", ("','",))
            stok = self.take("NAME", ("'S'",))
            if stok.text != "S":
                raise ExprError(f"got {stok.text!r}", stok.offset, ("'S'",))
            self.take("LPAREN", ("'('",))
            n = self.int_arg()
            self.take("RPAREN", ("')'",))
            self.take("RPAREN", ("')'",))
            return PSyl(l, n)
        if name in NAMED_ARITIES:
            self.take("LPAREN", ("'('",))
            args = [self.int_arg()]
            for _ in range(NAMED_ARITIES[name] - 1):
                self.take("COMMA", ("','",))
                args.append(self.int_arg())
            self.take("RPAREN", ("')'",))
            node = Named(name, tuple(args))
            _validate_named(node, tok.offset)
            return node
        if name in FAMILIES:
            sign = ""
            if self.peek().kind in ("PLUS", "MINUS"):
                sign = self.peek().text
                self.pos += 1
            self.take("LPAREN", ("'('",))
            dim = self.int_arg()
            self.take("COMMA", ("','",))
            q = self.int_arg()
            self.take("RPAREN", ("')'",))
            node = Classical(name, sign, (dim, q))
            try:
                ClassicalSpec(name, dim, q, sign)
            except (Inapplicable, ValueError) as e:
                raise ExprError(str(e), tok.offset, ()) from None
            return node
        raise ExprError(
            f"unknown group family or construction {name!r}", tok.offset,
            tuple(sorted(FAMILIES)) + tuple(sorted(NAMED_ARITIES)) + ("Syl", "P", "model"),
        )

    def model_atom(self, tok: Token) -> Model:
        self.take("LPAREN", ("'('",))
        parts = [self.take("NAME", ("entry id",)).text]
        while self.peek().kind == "MINUS":
            self.pos += 1
            nxt = self.peek()
            if nxt.kind not in ("NAME", "INT"):
                raise ExprError(f"got {nxt.text!r}", nxt.offset, ("entry id part",))
            parts.append(nxt.text)
            self.pos += 1
        entry = "-".join(parts)
        self.take("SEMI", ("';'",))
        params: list[tuple[str, int | str]] = []
        while True:
            key = self.take("NAME", ("parameter name",)).text
            self.take("EQ", ("'='",))
            val_tok = self.peek()
            if val_tok.kind == "INT":
                val: int | str = int(val_tok.text)
                self.pos += 1
            elif val_tok.kind in ("PLUS", "MINUS"):
                val = val_tok.text
                self.pos += 1
            else:
                raise ExprError(f"got {val_tok.text!r}", val_tok.offset,
                                ("integer", "'+'", "'-'"))
            params.append((key, val))
            if self.peek().kind == "COMMA":
                self.pos += 1
                continue
            break
        self.take("RPAREN", ("')'",))
        from .catalog import CATALOG
        if entry not in CATALOG:
            raise ExprError(f"unknown catalog entry {entry!r}", tok.offset,
                            tuple(sorted(CATALOG)))
        return Model(entry, tuple(params))


def _validate_named(node: Named, offset: int):
    k = node.kind
    a = node.args
    try:
        if k == "Q" and (a[0] < 8 or a[0] % 4):
            raise ValueError("quaternion order must be a multiple of 4, at least 8")
        if k == "D" and (a[0] < 4 or a[0] % 2):
            raise ValueError("dihedral order must be even, at least 4")
        if k in ("C", "S") and a[0] < 1:
            raise ValueError("size must be at least 1")
        if k in ("Up", "Sym", "Antisym", "Antisym0", "AntisymStar"):
            if a[0] < 1:
                raise ValueError("dimension must be at least 1")
            ff_from_size(a[1])
            if k == "AntisymStar" and ff_from_size(a[1]).r % 2:
                raise ValueError("AntisymStar needs a quadratic-extension field")
            if k == "Antisym0" and a[1] % 2:
                raise ValueError("Antisym0 is a characteristic-2 construction")
    except ValueError as e:
        raise ExprError(str(e), offset, ()) from None


def parse(text: str) -> Expr:
    """Parse an expression; raises ExprError with offset and expectations."""
    return _Parser(text).parse()


def print_expr(e: Expr) -> str:
    return e.text()


def eval_expr(e: Expr, budget: int | None = None, allow_l2: bool = False):
    """Evaluate an expression to a Group (lazy imports keep startup light)."""
    from . import catalog as cat
    from .groups import DEFAULT_BUDGET, direct_product, symmetric, sylow_of_symmetric
    from .groups import cyclic, dihedral, quaternion
    from .sylow import sylow

    bud = DEFAULT_BUDGET if budget is None else budget
    if isinstance(e, Classical):
        return build(ClassicalSpec(e.family, e.args[0], e.args[1], e.sign), bud)
    if isinstance(e, Named):
        k, a = e.kind, e.args
        if k == "Q":
            return quaternion(a[0])
        if k == "D":
            return dihedral(a[0])
        if k == "C":
            return cyclic(a[0])
        if k == "S":
            return symmetric(a[0], bud)
        f = ff_from_size(a[1])
        if k == "Up":
            return cat.up_group(a[0], f, bud)
        if k == "Sym":
            return cat.sym_matrices(a[0], f, bud)
        if k == "Antisym":
            return cat.antisym_matrices(a[0], f, bud)
        if k == "Antisym0":
            return cat.antisym0_matrices(a[0], f, bud)
        if k == "AntisymStar":
            return cat.antisym_star_matrices(a[0], f, bud)
    if isinstance(e, PSyl):
        return sylow_of_symmetric(e.l, e.n, bud)
    if isinstance(e, Syl):
        return sylow(eval_expr(e.inner, bud, allow_l2), e.p).subgroup
    if isinstance(e, Product):
        return direct_product(eval_expr(e.left, bud, allow_l2),
                              eval_expr(e.right, bud, allow_l2), bud)
    if isinstance(e, Model):
        entry = cat.get_entry(e.entry)
        params = dict(e.params)
        if "l" in params and "l" not in entry.param_names:
            prime = params.pop("l")
        elif "p" in entry.param_names:
            prime = params.get("p")
        elif "p" in params:
            prime = params.pop("p")
        else:
            prime = _default_prime(e.entry, params)
        if prime is None:
            raise Inapplicable(f"{e.entry}: missing prime parameter (l=... or p=...)")
        ok, why = entry.applicable(params, prime)
        if not ok:
            raise Inapplicable(f"{e.entry}: {why}")
        if entry.provisional(params, prime) and not allow_l2:
            raise Inapplicable(f"{e.entry}: provisional l = 2 regime needs the override")
        return entry.model(params, int(prime), bud)
    raise TypeError(f"cannot evaluate {e!r}")


def _default_prime(entry_id: str, params: dict) -> int:
    if entry_id.endswith("-2"):
        return 2
    if entry_id.endswith("-p"):
        if "q" in params:
            return ff_from_size(params["q"]).p
        raise Inapplicable(f"{entry_id}: give the prime explicitly (p=...)")
    raise Inapplicable(f"{entry_id}: give the prime explicitly (l=...)")
