"""Handwritten Gujarati glyph generation: strokes, classifiers, composition, outlines."""

from ._core import (
    GujfontError,
    Model,
    binarize,
    export_sfd,
    export_svg,
    extract_strokes,
    generate_glyph,
    is_unit_width,
    load_ruleset,
    render_reference,
    run_cli,
    stroke_features,
    synthesize_dataset,
    thin,
    trace_contours,
    train,
)

__all__ = [
    "GujfontError",
    "Model",
    "binarize",
    "export_sfd",
    "export_svg",
    "extract_strokes",
    "generate_glyph",
    "is_unit_width",
    "load_ruleset",
    "render_reference",
    "run_cli",
    "stroke_features",
    "synthesize_dataset",
    "thin",
    "trace_contours",
    "train",
]
