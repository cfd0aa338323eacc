import numpy as np
import pytest

from xwgrid.language import LEXICON
from xwgrid.model import GroundingModel, ModelConfig
from xwgrid.nn import RngHub

# D=8 profile: small enough for exhaustive finite-difference sweeps
TINY = ModelConfig(
    cnn_channels=(4, 4, 4, 4),
    positional_channels=4,
    rnn_hidden=8,
    mask_hidden=8,
    nav_channels=4,
    nav_mlp=16,
    action_hidden=16,
)


@pytest.fixture(scope="session")
def desk_model():
    return GroundingModel(ModelConfig.desk(), len(LEXICON), RngHub(11))


@pytest.fixture(scope="session")
def tiny_model64():
    model = GroundingModel(TINY, len(LEXICON), RngHub(5), dtype=np.float64)
    # zero-initialized positional channels make spatial detection degenerate;
    # gradient checks want a generic point
    model.store["pos_cube"].data[...] = np.random.default_rng(3).normal(
        0, 0.05, model.store["pos_cube"].data.shape
    )
    return model
