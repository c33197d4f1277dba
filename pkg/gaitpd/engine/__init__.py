from .tensor import Tensor, check_finite, parameter_count
from .layers import (Activation, Concatenate, Conv1D, Dense, Dropout, Flatten, Layer, LayerSpec,
                     MaxPool1D, build_layers, lecun_normal)
from .losses import binary_cross_entropy, categorical_cross_entropy, loss
from .optimizer import Nadam, OptimizerState, nadam_step
from . import functional
