# Hypothesis strategies producing small hypergeometric-type expressions as text

from hypothesis import strategies as st

# Atoms that are defined at every n >= 0, so any indicator class is valid.
ATOMS = [
    "n!",
    "2^n",
    "(-1)^n",
    "(1/2)^n",
    "3^(n+1)",
    "(n+1)",
    "n^2",
    "pochhammer(1/2,n)",
    "pochhammer(2,n)",
    "(2*n)!/n!",
    "1/(n+1)",
    "binomial(2*n,n)",
]

MAX_MODULUS = 5

coefficients = st.sampled_from(["1", "2", "-1", "1/3", "-5/2", "7"])
classes = st.integers(1, MAX_MODULUS).flatmap(lambda m: st.tuples(st.integers(0, m - 1), st.just(m)))
indices = st.integers(0, 40)


@st.composite
def terms(draw):
    return f"{draw(coefficients)}*{draw(st.sampled_from(ATOMS))}"


@st.composite
def components(draw, cls):
    j, m = cls
    body = " + ".join(draw(st.lists(terms(), min_size=1, max_size=2)))
    if m == 1:
        return body
    return f"({body})*mfoldInd(n,{m},{j})"


@st.composite
def expressions(draw, max_components: int = 3):
    """Up to max_components classes of modulus <= 5, each with one or two monomials."""
    picked = draw(st.lists(classes, min_size=1, max_size=max_components, unique=True))
    return " + ".join(draw(components(cls)) for cls in picked)
