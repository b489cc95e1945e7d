import numpy as np
from scipy.stats import linregress

from errors.errors import ArgumentError, DegenerateDataError, DimensionError
from pydantic_models.models import AssociationReport


def association_report(summaries, mles) -> AssociationReport:
    """Least squares fit of mle on summary plus the Pearson correlation."""
    summaries = np.asarray(summaries, dtype=float).ravel()
    mles = np.asarray(mles, dtype=float).ravel()
    if summaries.size != mles.size:
        raise DimensionError(f"{summaries.size} summaries for {mles.size} estimates")
    if summaries.size < 3:
        raise ArgumentError("association needs at least three pairs")
    if np.ptp(summaries) == 0 or np.ptp(mles) == 0:
        raise DegenerateDataError("association of a constant input is undefined")
    fit = linregress(summaries, mles)
    return AssociationReport(
        pearson_r=float(fit.rvalue), slope=float(fit.slope), intercept=float(fit.intercept)
    )
