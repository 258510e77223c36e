"""Inter-coder agreement: Krippendorff's alpha and its variants for coded
qualitative data, plus the classic chance-corrected coefficients."""

from .alpha import disagreement, expected_coincidences, observed_coincidences, universal_alpha
from .classic import (
    NominalRatings,
    UnsupportedError,
    cohen_kappa,
    contingency_matrix,
    fleiss_kappa,
    holsti_index,
    interpret_kappa,
    percent_agreement,
    scott_pi,
)
from .ingest import ParseError, ProjectError, parse_project, parse_reliability_csv
from .metrics import DISCRETE, LabelMetric, validate_metric
from .model import (
    Code,
    CodeApplication,
    Codebook,
    Coder,
    CodingProject,
    Document,
    LabelledJudgements,
    Quotation,
    SemanticDomain,
    unitize,
    validate_codebook,
    validate_coding,
)
from .report import Report, render_report
from .results import AgreementResult, NAReason, Verdict
from .variants import VariantSpec, compute_variant

__version__ = "0.1.0"
