from .channels import CANONICAL_ORDER, NUM_CHANNELS, SYMMETRIC_PAIRS, SensorChannel, pair, parse_channel_list
from .labels import NUM_SEVERITY_CLASSES, UPDRS_MAX, Group, SeverityClass, map_updrs_to_class
from .records import Dataset, Subject, SubjectRegistry, Walk
from .parser import WalkFileProcessor, parse_walk_file, serialize_walk
from .dataset import list_walk_files, load_dataset, read_demographics, read_exclusions
