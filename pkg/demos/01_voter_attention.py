"""How a costly-attention voter decides between two candidates.

A voter facing four equally likely policy profiles buys information about
them only when the stakes justify the entropy cost.  This script walks the
solver through the three regimes and reproduces the benchmark attention
tables, including the non-monotone effect of the marginal cost on the
average support for one candidate.
"""
import numpy as np

from rivote import UtilitySpec, mutual_information, solve_attention
from rivote.election import profile_belief

spec = UtilitySpec(family="absolute")
sigma = np.full((2, 2), 0.25)  # two equiprobable levels per candidate
LEVELS = (0.01, 0.4)


def show(t, mu):
    belief = profile_belief(spec, LEVELS, sigma, t)
    sol = solve_attention(belief, mu)
    cells = "  ".join(
        f"m{pair}={m:.3f}" for pair, m in zip(belief.support, sol.m)
    )
    print(f"  t={t:+.3f} mu={mu:.2f}: {sol.regime:11s} m_bar={sol.m_bar:.3f} "
          f"info={sol.info:.3f} nats\n           {cells}")


print("Attention by voter type (mu = 0.09)")
print("A partisan voter ignores politics entirely; a slightly leaning voter")
print("pays the most attention, watching for the rare profile that favours")
print("the other side; the median voter splits attention symmetrically.\n")
for t in (-0.2, -0.05, 0.0):
    show(t, 0.09)

print("\nAttention by marginal cost (t = -0.05)")
print("The average support for the right candidate first rises with the")
print("cost (uniform garbling inflates three low cells) and then falls")
print("(garbling concentrates on the one profile worth voting right for).\n")
for mu in (0.01, 0.10, 0.20):
    show(-0.05, mu)

print("\nInformation accounting")
belief = profile_belief(spec, LEVELS, sigma, -0.05)
sol = solve_attention(belief, 0.09)
print(f"  mutual information recomputed: {mutual_information(sol.m, belief.probs):.6f}")
print(f"  net objective E[m v] - mu*I : {sol.objective(belief, 0.09):+.6f}")
print(f"  fixed-point residual        : {sol.residual:.2e}")
