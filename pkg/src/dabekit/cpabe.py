"""Single-authority CP-ABE over access trees (the classic large-universe form).

All the decentralized issuing protocols in this workbench target exactly this
key shape, so one scheme serves as the shared correctness oracle.

    PK = (h = g^beta, e(g,g)^alpha)          MK = (alpha, beta)

    SK = (D = g^((alpha+r)/beta),
          per attribute j: D_j = g^r * H(j)^(r_j),  D'_j = g^(r_j))

    CT = (policy tree,
          C~  = m * e(g,g)^(alpha*s),
          C   = h^s,
          per leaf y: C_y = g^(q_y(0)),  C'_y = H(att(y))^(q_y(0)))

Decryption pairs key components against leaf components to obtain
e(g,g)^(r*q_y(0)) per leaf, interpolates up the tree to e(g,g)^(r*s), and
strips the blinding: m = C~ * e(g,g)^(rs) / e(C, D).

With a wrong or mixed key decryption still returns *some* target-group
element; the algorithm cannot tell it is wrong.  Callers compare against the
expected plaintext (transparent backend) or an integrity digest (KEM layer).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import GElem, GroupContext, GtElem, Scalar, pair
from .policy import AccessTree, DecryptionPlan, Node, Gate, Path, lagrange_coeff, satisfies, share_secret


class CpabeError(Exception):
    """Base class for scheme-usage errors."""


class EmptyAttributeSet(CpabeError):
    """Key issuance requires at least one attribute."""


class PolicyNotSatisfied(CpabeError):
    """The key's attributes do not satisfy the ciphertext policy."""


@dataclass(frozen=True)
class PublicKey:
    h: GElem                      # g^beta
    egg_alpha: GtElem             # e(g,g)^alpha
    # g^(1/beta): published by the two-authority issuing model, unused by
    # encrypt/decrypt; carried so that model's public key round-trips intact.
    g_inv_beta: GElem | None = None


@dataclass(frozen=True)
class MasterKey:
    alpha: Scalar
    beta: Scalar


@dataclass(frozen=True)
class SecretKey:
    # The per-user blinding exponent r.  Retained in memory for oracles and
    # attack inputs; never part of the serialized issued key.
    gid_r: Scalar | None
    D: GElem
    components: dict[str, tuple[GElem, GElem]] = field(default_factory=dict)

    @property
    def attributes(self) -> set[str]:
        return set(self.components)


@dataclass(frozen=True)
class Ciphertext:
    policy: AccessTree
    c_tilde: GtElem
    c: GElem
    leaves: dict[Path, tuple[GElem, GElem]]


def base_setup(ctx: GroupContext, rng) -> tuple[PublicKey, MasterKey]:
    alpha = ctx.random_nonzero(rng)
    beta = ctx.random_nonzero(rng)
    pk = PublicKey(h=ctx.g ** beta, egg_alpha=ctx.egg ** alpha, g_inv_beta=ctx.g ** beta.inv())
    return pk, MasterKey(alpha=alpha, beta=beta)


def base_keygen(ctx: GroupContext, mk: MasterKey, attrs, rng) -> SecretKey:
    """Issue a key for an attribute set; r and each r_j are drawn fresh."""
    attrs = set(attrs)
    if not attrs:
        raise EmptyAttributeSet("cannot issue a key for zero attributes")
    r = ctx.random_nonzero(rng)
    d = ctx.g ** ((mk.alpha + r) / mk.beta)
    components = {}
    for j in sorted(attrs):
        r_j = ctx.random_nonzero(rng)
        components[j] = (ctx.g ** r * ctx.hash_to_group(j) ** r_j, ctx.g ** r_j)
    return SecretKey(gid_r=r, D=d, components=components)


def encrypt(ctx: GroupContext, pk: PublicKey, m: GtElem, tree: AccessTree, rng) -> Ciphertext:
    s = ctx.random_nonzero(rng)
    shares = share_secret(ctx, tree, s, rng)
    leaf_attr = dict(tree.leaves())
    leaves = {
        path: (ctx.g ** q, ctx.hash_to_group(leaf_attr[path].attribute) ** q)
        for path, q in shares.items()
    }
    return Ciphertext(
        policy=tree,
        c_tilde=m * pk.egg_alpha ** s,
        c=pk.h ** s,
        leaves=leaves,
    )


def decrypt(ctx: GroupContext, pk: PublicKey, sk: SecretKey, ct: Ciphertext) -> GtElem:
    """Recover the plaintext; raises PolicyNotSatisfied when the key cannot."""
    plan = satisfies(ct.policy, sk.attributes)
    if not plan.satisfied:
        raise PolicyNotSatisfied(
            f"key attributes {sorted(sk.attributes)} do not satisfy the policy")
    a = _decrypt_node(ctx, sk, ct, plan, ct.policy.root, ())
    return ct.c_tilde * a / pair(ct.c, sk.D)


def _decrypt_node(ctx: GroupContext, sk: SecretKey, ct: Ciphertext,
                  plan: DecryptionPlan, node: Node, path: Path) -> GtElem:
    if not isinstance(node, Gate):
        d_j, dp_j = sk.components[node.attribute]
        c_y, cp_y = ct.leaves[path]
        return pair(d_j, c_y) / pair(dp_j, cp_y)
    chosen = plan.gates[path]
    value = ctx.gt_identity
    for i in chosen:
        child = _decrypt_node(ctx, sk, ct, plan, node.children[i - 1], path + (i,))
        value = value * child ** lagrange_coeff(ctx, i, chosen)
    return value


def validate_secret_key(ctx: GroupContext, pk: PublicKey, sk: SecretKey) -> bool:
    """Exact algebraic check of the key shape (needs the in-memory gid_r)."""
    if sk.gid_r is None:
        raise ValueError("validation needs the in-memory gid_r")
    if pair(sk.D, pk.h) != pk.egg_alpha * ctx.egg ** sk.gid_r:
        return False
    egg_r = ctx.egg ** sk.gid_r
    for j, (d_j, dp_j) in sk.components.items():
        if pair(d_j, ctx.g) / pair(dp_j, ctx.hash_to_group(j)) != egg_r:
            return False
    return True
