# Copyright (c) The UniGAP Authors. All rights reserved.
from .augmented import AugmentedGraph
from .bundle import GraphBundle, SplitMasks
from .io import (load_bundle, load_edgelist, load_linqs, planetoid_split,
                 read_matrix_bin, read_source, save_bundle, write_matrix_bin)
from .synthetic import (covariance_matrix, random_split, synth_latent_graph,
                        synth_sbm)
from .transforms import (laplacian, normalize_adjacency, normalized_laplacian,
                         row_normalize_adjacency)
from .utils import (adjusted_homophily, dataset_statistics, edge_homophily,
                    format_statistics)

__all__ = [
    'GraphBundle', 'SplitMasks', 'AugmentedGraph', 'load_bundle',
    'save_bundle', 'load_linqs', 'load_edgelist', 'read_source',
    'planetoid_split', 'read_matrix_bin', 'write_matrix_bin',
    'normalize_adjacency', 'normalized_laplacian', 'laplacian',
    'row_normalize_adjacency', 'edge_homophily', 'adjusted_homophily',
    'dataset_statistics', 'format_statistics', 'synth_latent_graph',
    'synth_sbm', 'covariance_matrix', 'random_split'
]
