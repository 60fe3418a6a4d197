"""relsom: relevance-model learning with ranked similarity measures and
explorable hierarchical SOM classifiers."""

from .advisor import (
    AdvisorRanking,
    MeasureScore,
    combined_score,
    inter_group_distance,
    intra_group_distance,
    rank_measures,
)
from .corpus import Corpus, DataItem, SamplingStrategy, draw_sample, load_corpus
from .features import DescriptorId, FeatureMatrix, extract, extract_all, registered_descriptors
from .labels import IRRELEVANT, NEUTRAL, RELEVANT, LabelStore
from .metric_space import (
    NORM_PS,
    NormalizedSpace,
    SimilarityMeasure,
    build_normalized_space,
    build_spaces,
    lp_distance,
)
from .projection import Embedding, mds_embed, overlay
from .session import (
    SessionConfig,
    advance,
    load_session,
    save_session,
    simulate,
    start_session,
    submit_labels,
)
from .som import (
    SomHyperparams,
    SomTree,
    build_tree,
    classify,
    classify_all,
    label_ratio,
    mix_ratio,
    node_layers,
    query_candidates,
    train_som,
)

__version__ = "0.1.0"
