"""Exception hierarchy shared across the toolkit."""


class BalanceKitError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(BalanceKitError):
    """Arguments violate a documented precondition."""


class DegenerateGeometry(InvalidInput):
    """Polygon is a point or segment where a full-dimensional set is required."""


class SchemaError(InvalidInput):
    """Input document does not match the published schema (missing/extra/typed fields)."""


class ValidationError(InvalidInput):
    """A schema-valid field violates an invariant. Carries the offending field path."""

    def __init__(self, field_path, message):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


class NumericalFailure(BalanceKitError):
    """A numerical operation (factorization, solve) failed."""


class FeatureUnavailable(BalanceKitError):
    """Requested computation needs optional data (e.g. joint-space dynamics) that is absent."""


class DegenerateLoad(InvalidInput):
    """Resultant normal force is nonpositive; the ZMP is undefined."""


class StanceInfeasible(BalanceKitError):
    """No contact wrench satisfies the stance constraints."""


class NoValidImpulse(BalanceKitError):
    """Every friction-cone generator is jammed; the impulse set is empty."""


class InvalidImpactDirection(InvalidInput):
    """Reference contact velocity has no positive approach component along the impact normal."""


class SolverFailure(BalanceKitError):
    """An LP/QP backend reported a non-optimal status. Carries the pipeline stage."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class JammedGeneratorWarning(UserWarning):
    """A friction-cone generator has nonpositive normal gain and was dropped."""
