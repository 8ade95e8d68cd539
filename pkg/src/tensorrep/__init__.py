"""tensorrep: anisotropic tensor function representations for the twelve
2D point groups, built from low-order structural tensor sets."""

from .anisorep import (Model, RepresentationSpec, constraint_residuals,
                       equivariance_residual, eval_scalar, eval_tensor,
                       load_model, representation_spec, stress_from_potential,
                       symmetrize, unsymmetrized_model)
from .pointgroups import GROUP_IDS, PointGroup, cayley_table, group
from .structural import StructuralSet, characterized_group, structural_set, zheng_tensor
from .tensor2d import (OrthTransform, SkewTensor2, SymTensor2, TensorN,
                       Vector2, apply_transform, reflection, rotation)

__all__ = [
    "GROUP_IDS", "Model", "OrthTransform", "PointGroup", "RepresentationSpec",
    "SkewTensor2", "StructuralSet", "SymTensor2", "TensorN", "Vector2",
    "apply_transform", "cayley_table", "characterized_group",
    "constraint_residuals", "equivariance_residual", "eval_scalar",
    "eval_tensor", "group", "load_model", "reflection", "representation_spec",
    "rotation", "stress_from_potential", "structural_set", "symmetrize",
    "unsymmetrized_model", "zheng_tensor",
]

__version__ = "0.1.0"
