"""Exception hierarchy for proportion/ratio estimation.

Everything raised on purpose derives from PropRatioError so callers can
catch library failures in one clause; subclasses distinguish validation,
degeneracy, numerical, and resource problems (the CLI maps these onto
exit codes).
"""


class PropRatioError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PropRatioError, ValueError):
    """An input value violates a documented invariant."""


class ParseError(PropRatioError, ValueError):
    """A population CSV or summary JSON file could not be parsed.

    ``line`` is the 1-based line number when known, else None.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyPopulation(ValidationError):
    """Population has fewer than two units."""


class EmptySample(ValidationError):
    """A sample summary was requested for zero units."""


class DegeneratePopulation(PropRatioError):
    """All attribute values equal, or the auxiliary variable is constant
    (or has non-positive mean), so the summary statistics do not exist."""


class InvalidDesign(ValidationError):
    """Sample size incompatible with the population size."""


class UndefinedDeviation(PropRatioError):
    """Relative deviations need P > 0 and a nonzero auxiliary mean."""


class DomainError(PropRatioError, ValueError):
    """An estimator was evaluated outside its domain."""


class EstimatorDomainError(DomainError):
    """Domain failure inside a simulation or enumeration run.

    Carries enough context to identify the offending draw: ``label`` is
    the estimator, ``replicate`` the Monte Carlo replicate index or
    ``subset_rank`` the lexicographic rank of the enumerated subset.
    """

    def __init__(self, message, label=None, replicate=None, subset_rank=None):
        self.label = label
        self.replicate = replicate
        self.subset_rank = subset_rank
        where = []
        if label is not None:
            where.append(f"estimator {label!r}")
        if replicate is not None:
            where.append(f"replicate {replicate}")
        if subset_rank is not None:
            where.append(f"subset rank {subset_rank}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class DegenerateAuxiliary(PropRatioError):
    """The auxiliary coefficient of variation is zero."""


class SingularSystem(PropRatioError):
    """The weight-optimization normal equations are (near-)singular."""


class TooManySamples(PropRatioError):
    """C(N, n) exceeds the configured enumeration limit."""


class UnreachableTarget(PropRatioError):
    """The synthetic-population generator could not hit its targets."""
