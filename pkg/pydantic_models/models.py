from typing import Annotated, List, Literal, Optional

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

from config.config import OUTPUT_DIR

ExperimentName = Literal[
    "ar1_abc",
    "svm_robustness",
    "gamma_bvm",
    "laplace_pivot",
    "iep_limit",
    "musq_bimodal",
]


def _split_floats(value):
    # config files carry lists as "0.5, 1, 3, 10"
    if isinstance(value, str):
        return [float(part) for part in value.split(",") if part.strip()]
    return value


FloatList = Annotated[List[float], BeforeValidator(_split_floats)]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class KernelSpec(StrictModel):
    kind: Literal["gaussian", "linear"] = "gaussian"
    gamma: float = Field(1e-5, gt=0)  # multiplies the squared distance; ignored by the linear kernel


class QpConfig(StrictModel):
    tol: float = Field(1e-8, gt=0)
    max_iter: Optional[int] = Field(None, gt=0)  # None -> 100 * m**2


class PsvmConfig(StrictModel):
    kernel: KernelSpec = KernelSpec()
    qp: QpConfig = QpConfig()
    k: Optional[int] = Field(None, ge=1)  # None -> n_train // 2
    h: int = Field(4, ge=2)
    d: int = Field(1, ge=1)
    cost: float = Field(1.0, gt=0)
    standardize: bool = False
    eigen_solver: Literal["lapack", "jacobi"] = "lapack"
    # basis eigenpairs at or below eigen_floor * lambda_1 are dropped
    eigen_floor: float = Field(1e-10, gt=0, lt=1)

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.k is not None and self.d > self.k:
            raise ValueError(f"target dimension d={self.d} exceeds basis size k={self.k}")
        return self


class LinearPsvmConfig(StrictModel):
    qp: QpConfig = QpConfig()
    h: int = Field(2, ge=2)
    d: int = Field(1, ge=1)
    cost: float = Field(1.0, gt=0)
    standardize: bool = True
    cut_points: Optional[FloatList] = None  # explicit slicing points override quantiles


class AcceptanceRule(StrictModel):
    quantile: Optional[float] = Field(None, gt=0, le=1)
    epsilon: Optional[float] = Field(None, gt=0)

    @model_validator(mode="before")
    @classmethod
    def default_to_quantile(cls, data):
        if isinstance(data, dict) and data.get("quantile") is None and data.get("epsilon") is None:
            return {**data, "quantile": 0.10}
        return data

    @model_validator(mode="after")
    def exactly_one_rule(self):
        if self.quantile is not None and self.epsilon is not None:
            raise ValueError("set either quantile or epsilon, not both")
        return self

    @property
    def label(self) -> str:
        if self.quantile is not None:
            return f"quantile={self.quantile!r}"
        return f"epsilon={self.epsilon!r}"


class ABCConfig(StrictModel):
    n_prior: int = Field(1000, ge=10)
    n_obs: int = Field(100, ge=1)
    accept: AcceptanceRule = AcceptanceRule()
    metric: Literal["euclidean", "standardized_euclidean"] = "standardized_euclidean"
    reuse_training: bool = True
    psvm: PsvmConfig = PsvmConfig()
    seed: int = Field(0, ge=0, lt=2**64)


class ExperimentSection(StrictModel):
    experiment: ExperimentName
    seed: int = Field(..., ge=0, lt=2**64)
    output_dir: str = OUTPUT_DIR


class PsvmSection(StrictModel):
    k: Optional[int] = Field(None, ge=1)
    h: int = Field(4, ge=2)
    d: int = Field(1, ge=1)
    cost: float = Field(1.0, gt=0)
    standardize: bool = False
    eigen_solver: Literal["lapack", "jacobi"] = "lapack"
    # basis eigenpairs at or below eigen_floor * lambda_1 are dropped
    eigen_floor: float = Field(1e-10, gt=0, lt=1)

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.k is not None and self.d > self.k:
            raise ValueError(f"target dimension d={self.d} exceeds basis size k={self.k}")
        return self


class AbcSection(StrictModel):
    n_prior: int = Field(1000, ge=10)
    quantile: Optional[float] = Field(None, gt=0, le=1)
    epsilon: Optional[float] = Field(None, gt=0)
    metric: Literal["euclidean", "standardized_euclidean"] = "standardized_euclidean"
    reuse_training: bool = True

    @model_validator(mode="after")
    def one_rule(self):
        if self.quantile is not None and self.epsilon is not None:
            raise ValueError("set either quantile or epsilon, not both")
        return self


class Ar1Section(StrictModel):
    n_obs: int = Field(100, ge=2)
    beta0: float = 0.6
    sigma: float = Field(0.5, gt=0)
    y1: float = 1.0
    prior_low: float = -1.0
    prior_high: float = 1.0
    grid_size: int = Field(4096, ge=64)
    baseline_mle: bool = True
    n_holdout: int = Field(200, ge=0)  # held-out draws for the out-of-sample association; 0 skips it

    @model_validator(mode="after")
    def check_prior(self):
        if self.prior_low >= self.prior_high:
            raise ValueError("prior_low must be below prior_high")
        return self


class SvmRobustnessSection(StrictModel):
    m: int = Field(2000, ge=10)
    cut_point: float = 1.5
    curvature: float = 0.001  # weight of the X1^2 + X2^2 perturbation
    noise_sd: float = Field(1.0, gt=0)
    cost: float = Field(1.0, gt=0)
    standardize: bool = True
    replications: int = Field(10, ge=1)


class GammaBvmSection(StrictModel):
    n: int = Field(5000, ge=2)
    alpha0: float = Field(3.0, gt=0)
    beta: float = Field(2.0, gt=0)
    prior_rate: float = Field(1.0, ge=0)
    n_draws: int = Field(2000, ge=1)
    grid_size: int = Field(8192, ge=4096)
    alphas: FloatList = [0.5, 1.0, 3.0, 10.0]
    level: float = Field(0.95, gt=0, lt=1)


class LaplacePivotSection(StrictModel):
    n: int = Field(1000, ge=1)
    mu0: float = 0.0
    lambdas: FloatList = [0.5, 1.0, 2.0]
    n_draws: int = Field(100_000, ge=2)


class IepLimitSection(StrictModel):
    lam: float = Field(2.0, gt=0)
    mu: float = Field(1.0, gt=0)
    x0: int = Field(5, ge=0)
    horizon: float = Field(500.0, gt=0)
    grid_size: int = Field(4096, ge=4096)


class MusqBimodalSection(StrictModel):
    mu0: float = 1.5
    n: int = Field(50, ge=2)
    shape: float = Field(3.0, gt=0)
    scale: float = Field(1.0, gt=0)
    grid_size: int = Field(8192, ge=4096)
    level: float = Field(0.95, gt=0, lt=1)

    @field_validator("mu0")
    @classmethod
    def nonzero_mean(cls, value):
        if value == 0:
            raise ValueError("mu0 must be nonzero so the data have positive variance")
        return value


class ExperimentConfig(StrictModel):
    experiment: ExperimentSection
    kernel: KernelSpec = KernelSpec()
    qp: QpConfig = QpConfig()
    psvm: PsvmSection = PsvmSection()
    abc: AbcSection = AbcSection()
    ar1: Ar1Section = Ar1Section()
    svm_robustness: SvmRobustnessSection = SvmRobustnessSection()
    gamma_bvm: GammaBvmSection = GammaBvmSection()
    laplace_pivot: LaplacePivotSection = LaplacePivotSection()
    iep_limit: IepLimitSection = IepLimitSection()
    musq_bimodal: MusqBimodalSection = MusqBimodalSection()

    def psvm_config(self) -> PsvmConfig:
        return PsvmConfig(kernel=self.kernel, qp=self.qp, **self.psvm.model_dump())

    def abc_config(self, n_obs: int) -> ABCConfig:
        return ABCConfig(
            n_prior=self.abc.n_prior,
            n_obs=n_obs,
            accept=AcceptanceRule(quantile=self.abc.quantile, epsilon=self.abc.epsilon),
            metric=self.abc.metric,
            reuse_training=self.abc.reuse_training,
            psvm=self.psvm_config(),
            seed=self.experiment.seed,
        )


class IntervalReport(StrictModel):
    center: float
    half_width: float = Field(..., ge=0)
    level: float = Field(..., gt=0, lt=1)
    basis: Literal["fisher", "godambe", "empirical"]

    @property
    def lower(self) -> float:
        return self.center - self.half_width

    @property
    def upper(self) -> float:
        return self.center + self.half_width


class AssociationReport(StrictModel):
    pearson_r: float
    slope: float
    intercept: float
