from .schedule import CONTINUE, FINISHED, IMPROVED, ROUND_END, RoundScheduler, TrainConfig
from .log import EpochRecord, RoundRecord, TrainLog
from .trainer import EpochResult, check_no_leakage, evaluate_accuracy, run_epoch, spawn_rngs, train
