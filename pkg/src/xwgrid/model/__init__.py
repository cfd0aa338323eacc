from .config import ModelConfig
from .network import GroundingModel, GroundingResult, InterpStep, detect

__all__ = ["GroundingModel", "GroundingResult", "InterpStep", "ModelConfig", "detect"]
