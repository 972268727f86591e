"""The PQCNN stages: loading, convolution, pooling, dense layer and readout."""

from src.layers.convolution import conv_circuit, conv_layer
from src.layers.dense import dense_layer, measure_distribution, pad_state
from src.layers.loader import RegisterLayout, encode_batch, qdl_encode, qdl_loader_angles
from src.layers.pooling import PoolingBranch, PoolingSpec, pooling_branches, pooling_channel, pooling_kraus
from src.layers.readout import ReadoutBinning, ReadoutStrategy, collision_free_configurations, readout

__all__ = [
    "PoolingBranch",
    "PoolingSpec",
    "ReadoutBinning",
    "ReadoutStrategy",
    "RegisterLayout",
    "collision_free_configurations",
    "conv_circuit",
    "conv_layer",
    "dense_layer",
    "encode_batch",
    "measure_distribution",
    "pad_state",
    "pooling_branches",
    "pooling_channel",
    "pooling_kraus",
    "qdl_encode",
    "qdl_loader_angles",
    "readout",
]
