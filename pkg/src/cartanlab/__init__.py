"""Exact exterior calculus on coordinate charts, with executable commutator identities."""
from .scalar import Chart, Scalar
from .forms import Form, VectorField
from .bundle import BundleValuedForm, Connection
from .polyvector import VectorValuedForm
from .gencomplex import GeneralizedSection, GeneralizedWord, IsotropicFrame

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "Scalar",
    "Form",
    "VectorField",
    "BundleValuedForm",
    "Connection",
    "VectorValuedForm",
    "GeneralizedSection",
    "GeneralizedWord",
    "IsotropicFrame",
]
