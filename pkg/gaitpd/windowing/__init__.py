from .segmentation import NO_SEVERITY, Window, WindowSet, segment_walk, window_starts
from .folds import FoldPlan, build_folds, check_fold_plan, fold_group_sizes, materialize_fold
