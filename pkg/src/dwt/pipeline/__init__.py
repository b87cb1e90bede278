"""Pipeline orchestration: prompts, model clients, and the two-stage run."""

from dwt.pipeline.client import (
    API_KEY_ENV,
    CompletionParams,
    CompletionResult,
    HttpModelClient,
    ModelClient,
    ModelError,
    ScriptedClient,
    UsageStats,
)
from dwt.pipeline.runner import (
    InputDiagram,
    PipelineConfig,
    PipelineResult,
    RefinementRound,
    RefinementTrace,
    StageError,
    StageOneResult,
    run_pipeline,
    run_stage1,
    run_stage2,
)
from dwt.pipeline.templates import (
    PromptTemplate,
    TemplateError,
    load_default_templates,
    load_templates_from_dir,
)

__all__ = [
    "API_KEY_ENV",
    "CompletionParams",
    "CompletionResult",
    "HttpModelClient",
    "InputDiagram",
    "ModelClient",
    "ModelError",
    "PipelineConfig",
    "PipelineResult",
    "PromptTemplate",
    "RefinementRound",
    "RefinementTrace",
    "ScriptedClient",
    "StageError",
    "StageOneResult",
    "TemplateError",
    "UsageStats",
    "load_default_templates",
    "load_templates_from_dir",
    "run_pipeline",
    "run_stage1",
    "run_stage2",
]
