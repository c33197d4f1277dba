from .aggregation import aggregate_subject, aggregate_walks, class_fractions
from .metrics import (ClassMetrics, ConfusionMatrix, DetectionMetrics, MulticlassMetrics, accuracy,
                      detection_metrics, mean_sd, multiclass_metrics)
from .cv import CVResult, EvalReport, FoldResult, build_report, fold_seed, run_cv, run_fold
from .ablation import resolve_pairs, run_ablation
from .reports import (ablation_frame, confusion_frame, cv_frames, detection_frame, export_workbook, fmt_pct,
                      render_ablation, render_cv, severity_frame, write_reports)
