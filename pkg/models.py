from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from errors import ConfigurationError, DomainError

SIGNATURE_TOLERANCE = 1e-12


class LevelSpec:
    """Threshold given directly, as a quantile probability or as a normalized level"""

    ABSOLUTE = 'absolute'
    QUANTILE = 'quantile'
    NORMALIZED = 'normalized'

    __slots__ = ('kind', 'value')

    def __init__(self, kind, value):
        value = float(value)
        if kind == self.QUANTILE and not 0.0 < value < 1.0:
            raise DomainError(f'Quantile probability must lie in (0, 1), got {value}')
        if kind == self.NORMALIZED and not value > 0.0:
            raise DomainError(f'Normalized level needs tau > 0, got {value}')
        if kind not in (self.ABSOLUTE, self.QUANTILE, self.NORMALIZED):
            raise DomainError(f'Unknown level kind {kind!r}')
        self.kind = kind
        self.value = value

    @classmethod
    def absolute(cls, u):
        return cls(cls.ABSOLUTE, u)

    @classmethod
    def quantile(cls, p):
        return cls(cls.QUANTILE, p)

    @classmethod
    def normalized(cls, tau):
        return cls(cls.NORMALIZED, tau)

    def __eq__(self, other):
        return isinstance(other, LevelSpec) and (self.kind, self.value) == (other.kind, other.value)

    def __hash__(self):
        return hash((self.kind, self.value))

    def __repr__(self):
        return f'<LevelSpec {self.kind}={self.value:g}>'


@dataclass(frozen=True)
class CycleSeries:
    """Maxima over disjoint blocks of k - 1 consecutive observations"""
    values: np.ndarray
    k: int

    @property
    def m(self):
        return int(self.values.size)

    @property
    def block_length(self):
        return self.k - 1

    def __len__(self):
        return self.m


@dataclass(frozen=True)
class ExceedanceSummary:
    """Exceedances of a level; indices are 0-based positions in the series"""
    level: float
    indices: np.ndarray
    interexceedance_times: np.ndarray

    @property
    def count(self):
        return int(self.indices.size)


class EstimatorId(str, Enum):
    RUNS = 'RUNS'
    INTERVALS = 'INTERVALS'
    UPCROSS = 'UPCROSS'
    ML = 'ML'
    FF = 'FF'
    FFSTAR = 'FFSTAR'
    FDIR = 'FDIR'
    FIND_UPCROSS = 'FIND_UPCROSS'
    FIND_INTERVALS = 'FIND_INTERVALS'
    FIND_ML = 'FIND_ML'
    FIND_FF = 'FIND_FF'
    FINDTDC = 'FINDTDC'

    @property
    def is_indirect(self):
        """Cycle-based estimators record the cycle order k"""
        return self not in (EstimatorId.RUNS, EstimatorId.INTERVALS,
                            EstimatorId.UPCROSS, EstimatorId.ML)

    @property
    def is_level_free(self):
        return self in (EstimatorId.FF, EstimatorId.FFSTAR)

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper().replace('-', '_'))
        except ValueError:
            raise ConfigurationError(f'Unknown estimator {name!r}; expected one of {[e.value for e in cls]}')


FIND_BASES = {
    EstimatorId.UPCROSS: EstimatorId.FIND_UPCROSS,
    EstimatorId.INTERVALS: EstimatorId.FIND_INTERVALS,
    EstimatorId.ML: EstimatorId.FIND_ML,
    EstimatorId.FF: EstimatorId.FIND_FF,
}


@dataclass(frozen=True)
class ThetaEstimate:
    """Extremal index estimate; value is raw clipped to [0, 1]"""
    estimator_id: EstimatorId
    raw: float
    k: Optional[int] = None
    level: Optional[float] = None
    n_exceedances: Optional[int] = None
    value: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'value', min(1.0, max(0.0, float(self.raw))))


@dataclass(frozen=True)
class DiagnosticPoint:
    """One point (m, statistic) of a diagnostic trajectory; value None marks a missing point"""
    m: int
    k: int
    tau: float
    s: float
    r: Optional[int]
    statistic: str
    value: Optional[float]


@dataclass(frozen=True)
class KSelectionRow:
    k: int
    d_k: int
    p_k: float
    gap: Optional[float]
    forward_gap: float


@dataclass(frozen=True)
class KSelectionReport:
    """Terminal d_k / p_k values and the heuristic choice of k"""
    rows: List[KSelectionRow]
    recommended_k: Optional[int]
    threshold: float
    tau: float
    s: float
    advisory: str = ('heuristic: the d_k gaps hint at D(k) but do not decide it; '
                     'inspect the trajectories before relying on the recommended k')


class MMSignature:
    """Finite moving maxima signature: nonnegative coefficients alpha[l, j] summing to 1"""

    def __init__(self, coefficients):
        coefficients = {(int(l), int(j)): a for (l, j), a in dict(coefficients).items()}
        if not coefficients:
            raise DomainError('Signature needs at least one coefficient')
        if any(l < 1 for l, _ in coefficients):
            raise DomainError('Signature rows are numbered from l = 1')
        exact = all(isinstance(a, (int, Fraction)) for a in coefficients.values())
        if exact:
            coefficients = {key: Fraction(a) for key, a in coefficients.items()}
        else:
            coefficients = {key: float(a) for key, a in coefficients.items()}
        if any(a < 0 for a in coefficients.values()):
            raise DomainError('Signature coefficients must be nonnegative')
        total = sum(coefficients.values())
        if (exact and total != 1) or (not exact and abs(total - 1.0) > SIGNATURE_TOLERANCE):
            raise DomainError(f'Signature coefficients must sum to 1, got {float(total):.15g}')
        self.coefficients: Dict[Tuple[int, int], object] = coefficients
        self.exact = exact

    @property
    def rows(self):
        return sorted({l for l, _ in self.coefficients})

    @property
    def j_min(self):
        return min(j for _, j in self.coefficients)

    @property
    def j_max(self):
        return max(j for _, j in self.coefficients)

    @property
    def width(self):
        return self.j_max - self.j_min + 1

    def alpha(self, l, j):
        return self.coefficients.get((l, j), 0)

    def row(self, l):
        """Coefficients of row l over j_min..j_max"""
        return [self.alpha(l, j) for j in range(self.j_min, self.j_max + 1)]

    def __repr__(self):
        return f'<MMSignature rows={len(self.rows)} j={self.j_min}..{self.j_max}>'


@dataclass(frozen=True)
class DkCheck:
    """Outcome of the D(k) signature check; witness is the first violating (l, j)"""
    k: int
    holds: bool
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.holds


class ModelId(str, Enum):
    AR_CAUCHY = 'AR_CAUCHY'
    AR_UNIF = 'AR_UNIF'
    MAR = 'MAR'
    MARKOV_LOGISTIC = 'MARKOV_LOGISTIC'
    GARCH11 = 'GARCH11'
    MM = 'MM'

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper().replace('-', '_'))
        except ValueError:
            raise ConfigurationError(f'Unknown model {name!r}; expected one of {[m.value for m in cls]}')


@dataclass(frozen=True)
class ModelSpec:
    """Simulation model with its parameters; MM models carry a signature"""
    model: ModelId
    params: Mapping[str, float] = field(default_factory=dict)
    burn_in: int = 1000
    seed: int = 0
    signature: Optional[MMSignature] = None


@dataclass(frozen=True)
class StudyConfig:
    """Declarative description of a Monte-Carlo experiment"""
    model: ModelSpec
    n: int
    replicates: int
    k: int
    quantiles: Tuple[float, ...]
    estimators: Tuple[EstimatorId, ...]
    run: Optional[int] = None
    master_seed: int = 0
    upper_fraction: float = 0.05
    n_jobs: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigurationError('replicates must be at least 1')
        if self.n < 1:
            raise ConfigurationError('n must be at least 1')
        if self.k < 2:
            raise ConfigurationError('k must be at least 2')
        if not self.quantiles or not all(0.0 < q < 1.0 for q in self.quantiles):
            raise ConfigurationError('quantiles must be a nonempty list of probabilities in (0, 1)')
        if not self.estimators:
            raise ConfigurationError('at least one estimator is required')
        if not 0.0 < self.upper_fraction < 1.0:
            raise ConfigurationError('upper_fraction must lie in (0, 1)')
        if self.run is not None and self.run < 1:
            raise ConfigurationError('run must be at least 1')

    @property
    def runs_parameter(self):
        return self.k if self.run is None else self.run


@dataclass(frozen=True)
class StudyCell:
    """rmse / abias of one estimator at one quantile (None for level-free estimators)"""
    estimator: EstimatorId
    quantile: Optional[float]
    rmse: float
    abias: float
    mean: float
    successes: int
    failure_count: int


@dataclass(frozen=True)
class StudyResult:
    config: StudyConfig
    reference_theta: float
    provenance: str
    cells: List[StudyCell]

    def cell(self, estimator, quantile=None):
        estimator = EstimatorId.parse(estimator)
        for cell in self.cells:
            if cell.estimator == estimator and (cell.quantile == quantile or cell.quantile is None):
                return cell
        raise KeyError((estimator, quantile))


@dataclass(frozen=True)
class ReportRow:
    """One estimator of the application report; value None when the estimator failed"""
    estimator: EstimatorId
    value: Optional[float]
    raw: Optional[float]
    k: Optional[int]
    error: Optional[str] = None
