"""Template-driven clinical pseudo-note rendering."""

from .render import (
    ABSENT_VALUE,
    PseudoNote,
    TemplateSlotUnbound,
    UnknownModality,
    read_notes,
    render_all,
    render_disposition_report,
    render_modality,
    render_msem,
    write_notes,
)
from .templates import (
    ModalityTemplate,
    TemplateSpec,
    default_templates,
    load_templates,
    save_templates,
    templates_from_json,
    templates_to_json,
)

__all__ = [
    "ABSENT_VALUE",
    "ModalityTemplate",
    "PseudoNote",
    "TemplateSlotUnbound",
    "TemplateSpec",
    "UnknownModality",
    "default_templates",
    "load_templates",
    "read_notes",
    "render_all",
    "render_disposition_report",
    "render_modality",
    "render_msem",
    "save_templates",
    "templates_from_json",
    "templates_to_json",
    "write_notes",
]
