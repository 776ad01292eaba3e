from .ingest import Frame, IngestConfig, load_csv, write_csv
from .parser import HybridError, ConfigError, DataError, ModelingError, PipelineHooks
from .stager import Pipeline
from .artifact import ModelArtifact
from .hcmd import main, version, CmdPipeline, PipelineConfig
__version__ = version
