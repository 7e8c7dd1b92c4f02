"""Shape retrieval with kernel-density ring descriptors."""

from .descriptor import (
    Bandwidth,
    Centroid,
    Descriptor,
    DescriptorConfig,
    RingCountVector,
    centroid,
    describe,
    dhfp,
    kdfpe_eq7,
    kdfpe_kde,
    moment,
    optimal_bandwidth,
    ring_counts,
)
from .image_io import GrayImage, binarize, normalize_to_grid, read_netpbm, write_netpbm
from .retrieval import DescriptorDatabase, DescriptorRecord, cosine_similarity, load_db, rank, save_db

__version__ = "0.1.0"
