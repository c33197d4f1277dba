import numpy as np
import pytest

from conftest import synthetic_samples, write_walk_file
from errors import DataError, EmptyDataset, MalformedRow, NegativeForce, NonMonotoneTime, OutOfRange, UnknownSubject
from vgrf_data import (CANONICAL_ORDER, SYMMETRIC_PAIRS, Group, SensorChannel, SeverityClass, SubjectRegistry,
                       Subject, load_dataset, map_updrs_to_class, parse_channel_list, parse_walk_file,
                       pair, read_demographics, serialize_walk)


def test_canonical_order_has_eighteen_channels():
    assert len(CANONICAL_ORDER) == 18
    assert CANONICAL_ORDER[0] is SensorChannel.L1
    assert CANONICAL_ORDER[-2:] == [SensorChannel.LTotal, SensorChannel.RTotal]
    assert len(SYMMETRIC_PAIRS) == 9


def test_symmetric_pairing_is_total():
    for channel in CANONICAL_ORDER:
        assert pair(pair(channel)) is channel
        assert pair(channel) is not channel
    assert pair(SensorChannel.L3) is SensorChannel.R3
    assert pair(SensorChannel.LTotal) is SensorChannel.RTotal
    for left, right in SYMMETRIC_PAIRS.values():
        assert pair(left) is right


def test_parse_channel_list():
    assert parse_channel_list('all') == list(CANONICAL_ORDER)
    assert parse_channel_list('R1,L1') == [SensorChannel.L1, SensorChannel.R1]
    with pytest.raises(ValueError, match='Válidos'):
        parse_channel_list('L9')


@pytest.mark.parametrize('updrs,level', [
    (0, 1), (4, 1), (5, 2), (14, 2), (15, 3), (24, 3), (25, 4), (34, 4), (35, 5), (70, 5), (176, 5),
])
def test_map_updrs_to_class(updrs, level):
    assert map_updrs_to_class(updrs) == SeverityClass(level)


def test_map_updrs_monotone():
    levels = [map_updrs_to_class(u).level for u in range(0, 177)]
    assert levels == sorted(levels)


@pytest.mark.parametrize('updrs', [-1, 177, None])
def test_map_updrs_out_of_range(updrs):
    with pytest.raises(OutOfRange):
        map_updrs_to_class(updrs)


def test_group_parse_codes():
    assert Group.parse('PD') is Group.Parkinson
    assert Group.parse('1') is Group.Parkinson
    assert Group.parse('CO') is Group.Control
    assert Group.parse(2) is Group.Control
    with pytest.raises(DataError):
        Group.parse('unknown')


def test_control_without_updrs_is_class_one():
    assert Subject('GaCo01', Group.Control).severity == SeverityClass(1)
    assert Subject('GaPt01', Group.Parkinson).severity is None


def test_parse_walk_file(tmp_path):
    samples = synthetic_samples(150, True, np.random.default_rng(1))
    path = write_walk_file(tmp_path / 'GaPt07_10.txt', samples)
    registry = SubjectRegistry([Subject('GaPt07', Group.Parkinson, 22, 'Ga')])

    walk = parse_walk_file(path, registry)

    assert walk.walk_id == 'GaPt07_10'
    assert walk.subject_id == 'GaPt07'
    assert walk.num_timesteps == 150
    assert walk.samples.shape == (150, 18)
    assert walk.detection_label == 1
    assert walk.severity == SeverityClass(3)
    assert walk.is_dual_task
    assert np.allclose(walk.samples, np.round(samples, 6))


def test_parse_walk_file_without_registry_is_unlabeled(tmp_path):
    path = write_walk_file(tmp_path / 'JuCo02_01.txt', synthetic_samples(120, False, np.random.default_rng(2)))
    walk = parse_walk_file(path)
    assert walk.group is None
    assert walk.detection_label is None
    assert walk.study == 'Ju'


def test_malformed_row_reports_line(tmp_path):
    samples = synthetic_samples(20, False, np.random.default_rng(3))
    path = write_walk_file(tmp_path / 'GaCo01_01.txt', samples)
    lines = open(path).read().splitlines()
    lines[4] = '\t'.join(lines[4].split('\t')[:10])
    (tmp_path / 'GaCo01_01.txt').write_text('\n'.join(lines) + '\n')

    with pytest.raises(MalformedRow) as excinfo:
        parse_walk_file(path)
    assert excinfo.value.line == 5
    assert excinfo.value.path == path
    assert ':5:' in str(excinfo.value)


def test_non_numeric_value(tmp_path):
    samples = synthetic_samples(20, False, np.random.default_rng(3))
    path = write_walk_file(tmp_path / 'GaCo01_01.txt', samples)
    lines = open(path).read().splitlines()
    fields = lines[2].split('\t')
    fields[3] = 'abc'
    lines[2] = '\t'.join(fields)
    (tmp_path / 'GaCo01_01.txt').write_text('\n'.join(lines) + '\n')

    with pytest.raises(MalformedRow) as excinfo:
        parse_walk_file(path)
    assert excinfo.value.line == 3


def test_time_gap_is_rejected(tmp_path):
    samples = synthetic_samples(30, False, np.random.default_rng(4))
    path = tmp_path / 'GaCo01_01.txt'
    write_walk_file(path, samples)
    lines = path.read_text().splitlines()
    del lines[10]
    path.write_text('\n'.join(lines) + '\n')

    with pytest.raises(NonMonotoneTime) as excinfo:
        parse_walk_file(str(path))
    assert excinfo.value.line == 11


def test_negative_force_is_rejected(tmp_path):
    samples = synthetic_samples(30, False, np.random.default_rng(5))
    samples[7, 2] = -1.0
    path = write_walk_file(tmp_path / 'GaCo01_01.txt', samples)
    with pytest.raises(NegativeForce) as excinfo:
        parse_walk_file(path)
    assert excinfo.value.line == 8


def test_unknown_subject(tmp_path):
    path = write_walk_file(tmp_path / 'GaPt99_01.txt', synthetic_samples(30, True, np.random.default_rng(6)))
    registry = SubjectRegistry([Subject('GaPt01', Group.Parkinson, 10)])
    with pytest.raises(UnknownSubject):
        parse_walk_file(path, registry)


def test_serialize_walk_reparses_identically(tmp_path):
    samples = synthetic_samples(200, True, np.random.default_rng(7))
    first = parse_walk_file(write_walk_file(tmp_path / 'GaPt01_01.txt', samples))
    out = tmp_path / 'copy'
    out.mkdir()
    second = parse_walk_file(serialize_walk(first, str(out / 'GaPt01_01.txt')))
    assert np.array_equal(first.samples, second.samples)


def test_read_demographics_native_header(tmp_path):
    manifest = tmp_path / 'demographics.txt'
    manifest.write_text(
        "ID\tStudy\tGroup\tSubjnum\tGender\tAge\tUPDRS\n"
        "GaPt03\tGa\t1\t3\t2\t82\t20\n"
        "GaCo02\tGa\t2\t2\t2\t70\t\n"
    )
    registry = read_demographics(str(manifest))
    assert registry.subjects['GaPt03'].group is Group.Parkinson
    assert registry.subjects['GaPt03'].updrs_total == 20
    assert registry.subjects['GaCo02'].updrs_total is None
    assert registry.subjects['GaCo02'].study == 'Ga'


def test_read_demographics_alias(tmp_path):
    manifest = tmp_path / 'demographics.csv'
    manifest.write_text("subject_id,group,updrs_total,alias_of\nGaPt01,PD,12,\nJuPt01,PD,,GaPt01\n")
    registry = read_demographics(str(manifest))
    assert registry.resolve('JuPt01').subject_id == 'GaPt01'


def test_read_demographics_missing_columns(tmp_path):
    manifest = tmp_path / 'demographics.csv'
    manifest.write_text("subject_id,updrs_total\nGaPt01,12\n")
    with pytest.raises(DataError, match='group'):
        read_demographics(str(manifest))


def test_load_dataset(gait_tree):
    root, manifest = gait_tree(n_pd=4, n_co=3)
    dataset = load_dataset(root, manifest)
    summary = dataset.summary()
    assert summary['subjects'] == {'Control': 3, 'Parkinson': 4}
    assert summary['total_walks'] == 7
    assert summary['excluded_walks'] == 0


def test_load_dataset_drops_short_walks_and_exclusions(gait_tree, tmp_path):
    root, manifest = gait_tree(n_pd=3, n_co=3)
    write_walk_file(f"{root}/GaPt01_02.txt", synthetic_samples(60, True, np.random.default_rng(8)))
    exclusions = tmp_path / 'exclude.txt'
    exclusions.write_text("GaCo01_01  # señal ruidosa\n")

    dataset = load_dataset(root, manifest, str(exclusions))

    ids = {w.walk_id for w in dataset.walks}
    assert 'GaPt01_02' not in ids
    assert 'GaCo01_01' not in ids
    assert dict(dataset.exclusions)['GaCo01_01'] == 'señal ruidosa'
    assert len(dataset.walks) == 5


def test_load_dataset_empty_root(tmp_path, gait_tree):
    _, manifest = gait_tree(n_pd=1, n_co=1)
    empty = tmp_path / 'empty'
    empty.mkdir()
    with pytest.raises(EmptyDataset):
        load_dataset(str(empty), manifest)
