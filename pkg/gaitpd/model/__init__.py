from .config import BRANCH_OUTPUT_UNITS, HEADS, ModelConfig, branch_specs, head_specs
from .network import DETECTION_THRESHOLD, GaitNetwork, build_network, classify_window, forward
from .checkpoint import load_network, load_params, read_checkpoint, save_params
