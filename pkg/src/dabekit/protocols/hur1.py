"""Model "hur1": two-authority issuing with a KGC and a single AA.

Setup:
    KGC: alpha <- Z_p^*, keeps alpha, publishes e(g,g)^alpha.
    AA:  beta  <- Z_p^*, keeps beta,  publishes {g^beta, g^(1/beta)}.
    Combined public key is the single-authority form (h = g^beta,
    e(g,g)^alpha), so encryption and decryption are unchanged.

Key generation (numbered arrows of the run script):
    1  DU -> AA   request
    2  AA -> KGC  engage trusted computation; F outputs x = (alpha + r) * beta
                  to KGC, where r is AA's fresh per-user exponent
    3  KGC -> AA  A = g^(x/t)   (t fresh at KGC)
    4  KGC -> DU  t
    5  AA -> DU   D' = A^(1/beta^2), and per attribute j:
                  D_j = g^r * H(j)^(r_j),  D'_j = g^(r_j)
    DU computes D = (D')^t = g^((alpha + r)/beta).

The A -> D' step is the unique exponentiation that makes (D')^t land on the
single-authority D; it mirrors the explicit T -> B = T^(1/beta^2) step of the
multi-authority variant of this model.
"""

from __future__ import annotations

from ..cpabe import PublicKey, SecretKey
from ..groups import GroupContext
from .common import EVERYONE, ModelConfig, PartyId, PartyState, Transcript
from .ideal import ideal_two_party

MODEL = "hur1"

TI = PartyId("TI", "TI")
KGC = PartyId("KGC", "KGC")
AA = PartyId("AA", "AA")


def setup(ctx: GroupContext, config: ModelConfig, rng,
          seed: int | None = None) -> tuple[dict[str, PartyState], PublicKey, Transcript]:
    tr = Transcript(model=MODEL, seed=seed)
    tr.send(TI, EVERYONE, "setup:TI", {"g": ctx.g})

    alpha = ctx.random_nonzero(rng)
    egg_alpha = ctx.egg ** alpha
    kgc = PartyState(KGC, MODEL, secrets={"alpha": alpha},
                     public={"e(g,g)^alpha": egg_alpha})
    tr.send(KGC, EVERYONE, "setup:KGC", {"e(g,g)^alpha": egg_alpha})

    beta = ctx.random_nonzero(rng)
    h = ctx.g ** beta
    h_inv = ctx.g ** beta.inv()
    aa = PartyState(AA, MODEL, secrets={"beta": beta},
                    public={"g^beta": h, "g^(1/beta)": h_inv},
                    registry=config.registry)
    tr.send(AA, EVERYONE, "setup:AA", {"g^beta": h, "g^(1/beta)": h_inv})

    pk = PublicKey(h=h, egg_alpha=egg_alpha, g_inv_beta=h_inv)
    return {"KGC": kgc, "AA": aa}, pk, tr


def keygen(ctx: GroupContext, states: dict[str, PartyState], attrs, rng,
           du_label: str = "DU", seed: int | None = None) -> tuple[SecretKey, Transcript]:
    kgc, aa = states["KGC"], states["AA"]
    du = PartyId("DU", du_label)
    tr = Transcript(model=MODEL, seed=seed)
    attrs = sorted(set(attrs))

    tr.send(du, AA, "1:request")

    r = ctx.random_nonzero(rng)
    aa.run = {"r": r}
    tr.send(AA, KGC, "2:2pc")
    tr.invoke_ideal("HURI", ("KGC",))
    x = ideal_two_party("HURI", {
        "KGC": {"alpha": kgc.secrets["alpha"]},
        "AA": {"r": r, "beta": aa.secrets["beta"]},
    })["KGC"]["x"]
    kgc.run = {"x": x}

    t = ctx.random_nonzero(rng)
    kgc.run["t"] = t
    a_elem = ctx.g ** (x / t)
    tr.send(KGC, AA, "3:A", {"A": a_elem})
    aa.run["A"] = a_elem

    tr.send(KGC, du, "4:t", {"t": t})

    beta = aa.secrets["beta"]
    d_prime = a_elem ** (beta * beta).inv()
    payload = {"D'": d_prime}
    components = {}
    r_js = {}
    for j in attrs:
        r_j = ctx.random_nonzero(rng)
        r_js[j] = r_j
        d_j = ctx.g ** r * ctx.hash_to_group(j) ** r_j
        dp_j = ctx.g ** r_j
        components[j] = (d_j, dp_j)
        payload[f"D_{j}"] = d_j
        payload[f"D'_{j}"] = dp_j
    aa.run["r_j"] = r_js
    tr.send(AA, du, "5:components", payload)

    d = d_prime ** t
    sk = SecretKey(gid_r=r, D=d, components=components)
    tr.final_outputs = {
        du_label: {"D": d, "t": t, **{f"D_{j}": c[0] for j, c in components.items()},
                   **{f"D'_{j}": c[1] for j, c in components.items()}},
    }
    return sk, tr
