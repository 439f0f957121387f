from .cli_constants import CliVerbs
from .pipeline_constants import AttemptStatus, OutputFiles, PipelineDefaults
from .settings_constants import SettingsConstants
from .transform_constants import OutcomeKind


__all__=['AttemptStatus','CliVerbs','OutcomeKind','OutputFiles','PipelineDefaults','SettingsConstants']
