"""Bilinear-group arithmetic on an exponent-tracking ("transparent") backend.

The workbench never needs a hard group: every claim it checks is an algebraic
identity in the exponents.  The transparent backend therefore represents an
element of the base group as its discrete logarithm to the generator ``g`` and
an element of the pairing target group as its discrete logarithm to
``e(g, g)``, both integers mod a prime ``p``.  The group operation is exponent
addition, exponentiation is exponent multiplication, and the pairing maps a
pair of base-group exponents to their product:

    g^a * g^b       -> g^(a+b)
    (g^a)^k         -> g^(a*k)
    e(g^a, g^b)     -> e(g,g)^(a*b)

This makes statements such as "the recovered element equals the victim's
master key" exact integer comparisons instead of probabilistic checks, at the
price of providing no cryptographic hardness whatsoever.  The backend id is
kept in every encoding so a hardened backend could be swapped in behind the
same surface.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from typing import Union

BACKEND_TRANSPARENT = "transparent"
BACKEND_EXTERNAL = "external"
BACKENDS = (BACKEND_TRANSPARENT, BACKEND_EXTERNAL)

# Mersenne prime 2^61 - 1: large enough that accidental exponent collisions in
# randomized trials are negligible, small enough that everything stays fast.
DEFAULT_PRIME = 2**61 - 1


class GroupError(Exception):
    """Base class for group-backend errors."""


class BackendMismatch(GroupError):
    """Operands come from different group parameters."""


class InversionOfZero(GroupError):
    """Multiplicative inverse of 0 requested."""


class MalformedEncoding(GroupError):
    """Serialized element does not parse."""


class ParamMismatch(GroupError):
    """Serialized element belongs to different group parameters."""


# Deterministic Miller-Rabin witnesses, valid for all n < 3_317_044_064_679_887_385_961_981
# (Sorenson & Webster), which covers every modulus this workbench accepts.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (for n below ~2^81)."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    if n >= _MR_DETERMINISTIC_BOUND:
        raise ValueError(f"modulus too large for deterministic primality test: {n}")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GroupParams:
    """Prime order, backend id, and the salt used for hashing into the group."""

    p: int
    backend: str = BACKEND_TRANSPARENT
    hash_salt: bytes = b""

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"group order must be an odd prime, got {self.p}")


def _same_params(a, b) -> None:
    if a.params != b.params:
        raise BackendMismatch(f"operands from different group parameters: {a.params} vs {b.params}")


@dataclass(frozen=True)
class Scalar:
    """An exponent in Z_p."""

    params: GroupParams
    value: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.params.p)

    def _lift(self, other: Union["Scalar", int]) -> "Scalar":
        if isinstance(other, int):
            return Scalar(self.params, other)
        if isinstance(other, Scalar):
            _same_params(self, other)
            return other
        raise TypeError(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        return Scalar(self.params, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Scalar(self.params, self.value - other.value)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return Scalar(self.params, self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.params, -self.value)

    def inv(self) -> "Scalar":
        if self.value == 0:
            raise InversionOfZero("0 has no multiplicative inverse")
        return Scalar(self.params, pow(self.value, -1, self.params.p))

    def __truediv__(self, other):
        return self * self._lift(other).inv()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inv()

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self) -> str:
        return f"Scalar({self.value} mod {self.params.p})"


class _ExpArith:
    """Shared multiplicative-notation arithmetic for exponent-carrying elements."""

    params: GroupParams
    exp: int

    def __mul__(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot multiply {type(self).__name__} by {type(other).__name__}")
        _same_params(self, other)
        return type(self)(self.params, self.exp + other.exp)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, k: Union[Scalar, int]):
        if isinstance(k, Scalar):
            _same_params(self, k)
            k = k.value
        elif not isinstance(k, int):
            raise TypeError(f"exponent must be Scalar or int, got {type(k).__name__}")
        return type(self)(self.params, self.exp * (k % self.params.p))

    def inv(self):
        return type(self)(self.params, -self.exp)

    @property
    def exponent(self) -> Scalar:
        return Scalar(self.params, self.exp)

    @property
    def is_identity(self) -> bool:
        return self.exp == 0


@dataclass(frozen=True)
class GElem(_ExpArith):
    """Base-group element g^exp (transparent backend carries exp)."""

    params: GroupParams
    exp: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "exp", self.exp % self.params.p)

    def __repr__(self) -> str:
        return f"GElem(g^{self.exp} mod {self.params.p})"


@dataclass(frozen=True)
class GtElem(_ExpArith):
    """Target-group element e(g,g)^exp."""

    params: GroupParams
    exp: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "exp", self.exp % self.params.p)

    def __repr__(self) -> str:
        return f"GtElem(e(g,g)^{self.exp} mod {self.params.p})"


Element = Union[Scalar, GElem, GtElem]


def pair(P: GElem, Q: GElem) -> GtElem:
    """Bilinear pairing: e(g^a, g^b) = e(g,g)^(a*b).  Non-degenerate since e(g,g) has exponent 1."""
    if not isinstance(P, GElem) or not isinstance(Q, GElem):
        raise TypeError("pairing takes two base-group elements")
    _same_params(P, Q)
    return GtElem(P.params, P.exp * Q.exp)


class GroupContext:
    """Handle to one bilinear group: generator, pairing, hashing, sampling."""

    def __init__(self, params: GroupParams | None = None, *, p: int | None = None,
                 hash_salt: bytes = b""):
        if params is None:
            params = GroupParams(p=p if p is not None else DEFAULT_PRIME, hash_salt=hash_salt)
        if params.backend != BACKEND_TRANSPARENT:
            raise NotImplementedError("only the transparent backend is implemented")
        self.params = params

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def g(self) -> GElem:
        return GElem(self.params, 1)

    @property
    def identity(self) -> GElem:
        return GElem(self.params, 0)

    @property
    def egg(self) -> GtElem:
        """pair(g, g), the target-group generator."""
        return GtElem(self.params, 1)

    @property
    def gt_identity(self) -> GtElem:
        return GtElem(self.params, 0)

    def scalar(self, value: int) -> Scalar:
        return Scalar(self.params, value)

    def g_exp(self, a: Scalar | int) -> GElem:
        return self.g ** a

    def pair(self, P: GElem, Q: GElem) -> GtElem:
        if P.params != self.params or Q.params != self.params:
            raise BackendMismatch("operands do not belong to this context")
        return pair(P, Q)

    def _digest(self, kind: bytes, label: str | bytes) -> int:
        data = label.encode("utf-8") if isinstance(label, str) else bytes(label)
        salt = self.params.hash_salt
        key = salt if len(salt) <= 64 else hashlib.sha256(salt).digest()
        ctr = 0
        while True:
            h = hashlib.blake2b(data + ctr.to_bytes(4, "little"), key=key, person=kind)
            v = int.from_bytes(h.digest(), "big") % self.p
            if v != 0:
                return v
            ctr += 1

    def hash_to_group(self, label: str | bytes) -> GElem:
        """Deterministic keyed hash into the base group; never the identity."""
        return GElem(self.params, self._digest(b"dabekit/g0", label))

    def hash_to_scalar(self, label: str | bytes) -> Scalar:
        """Deterministic keyed hash into Z_p^*."""
        return Scalar(self.params, self._digest(b"dabekit/zp", label))

    def random_scalar(self, rng) -> Scalar:
        """Uniform over Z_p (0 allowed; used for sharing-polynomial coefficients)."""
        return Scalar(self.params, rng.randrange(self.p))

    def random_nonzero(self, rng) -> Scalar:
        """Uniform over Z_p^*: rejection-samples away 0."""
        v = rng.randrange(self.p)
        while v == 0:
            v = rng.randrange(self.p)
        return Scalar(self.params, v)

    def random_gt(self, rng) -> GtElem:
        return self.egg ** self.random_scalar(rng)

    def __repr__(self) -> str:
        return f"GroupContext(p={self.p})"


_KINDS = {Scalar: "scalar", GElem: "g0", GtElem: "gt"}
_KIND_TYPES = {"scalar": Scalar, "g0": GElem, "gt": GtElem}


def element_encoding(x: Element) -> dict:
    """Canonical encoding object; integers as decimal strings."""
    kind = _KINDS.get(type(x))
    if kind is None:
        raise TypeError(f"not a group element: {type(x).__name__}")
    exp = x.value if isinstance(x, Scalar) else x.exp
    return {"backend": x.params.backend, "p": str(x.params.p), "kind": kind, "exp": str(exp)}


def serialize_element(x: Element) -> str:
    """Canonical text form of an element."""
    return json.dumps(element_encoding(x), separators=(",", ":"))


def serialize_element_bytes(x: Element) -> bytes:
    """Byte form: 8-byte little-endian length prefix + UTF-8 of the text form."""
    text = serialize_element(x).encode("utf-8")
    return struct.pack("<Q", len(text)) + text


def decode_element(ctx: GroupContext, obj: object) -> Element:
    """Decode a canonical encoding object against a context (checks backend and p)."""
    if not isinstance(obj, dict) or set(obj) != {"backend", "p", "kind", "exp"}:
        raise MalformedEncoding(f"bad element encoding: {obj!r}")
    if obj["backend"] not in BACKENDS or obj["kind"] not in _KIND_TYPES:
        raise MalformedEncoding(f"unknown backend/kind in {obj!r}")
    try:
        p = int(obj["p"])
        exp = int(obj["exp"])
    except (TypeError, ValueError) as e:
        raise MalformedEncoding(f"non-decimal field in {obj!r}") from e
    if obj["backend"] != ctx.params.backend or p != ctx.p:
        raise ParamMismatch(f"element for backend={obj['backend']} p={p}, context has p={ctx.p}")
    if not 0 <= exp < p:
        raise MalformedEncoding(f"exponent {exp} out of range for p={p}")
    typ = _KIND_TYPES[obj["kind"]]
    return typ(ctx.params, exp)


def deserialize_element(ctx: GroupContext, text: str | bytes) -> Element:
    """Inverse of serialize_element."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="strict")
    try:
        obj = json.loads(text)
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedEncoding(f"unparseable element text: {text!r}") from e
    return decode_element(ctx, obj)


def deserialize_element_bytes(ctx: GroupContext, data: bytes) -> Element:
    """Inverse of serialize_element_bytes."""
    if len(data) < 8:
        raise MalformedEncoding("truncated encoding: missing length prefix")
    (n,) = struct.unpack("<Q", data[:8])
    body = data[8:]
    if len(body) != n:
        raise MalformedEncoding(f"length prefix says {n} bytes, got {len(body)}")
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedEncoding("body is not UTF-8") from e
    return deserialize_element(ctx, text)
