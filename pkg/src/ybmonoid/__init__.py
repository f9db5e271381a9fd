"""Structure monoids of finite left non-degenerate solutions of the
Yang-Baxter equation, their left cancellative congruences and quotients."""

__version__ = "0.1.0"

from .congruence import (  # noqa: E402
    Congruence,
    compare_congruences,
    compute_congruence,
    lambda_constancy,
    lambda_stability,
    quotient_left_cancellative,
    stabilization_report,
)
from .monoid import (  # noqa: E402
    ADDITIVE,
    MULTIPLICATIVE,
    DegreeTable,
    GradedMonoid,
    Permutation,
    Word,
    build_degree_table,
    class_of,
    lambda_perm,
    pi_forward,
    pi_inverse,
)
from .quotient import (  # noqa: E402
    QuotientMonoid,
    bar_lambda,
    bar_r,
    build_quotient,
    c_witness,
    induced_generator_solution,
)
from .solution import (  # noqa: E402
    Solution,
    SolutionProfile,
    check_ybe,
    derived_left_solution,
    enumerate_solutions,
    load_solution,
    profile,
    validate_solution,
)
