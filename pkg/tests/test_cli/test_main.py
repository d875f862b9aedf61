import json
import math

import pytest

from main import main


def generate_segment(out) -> int:
    return main(['generate', 'parallel_segments', '--k', '1', '--direction', '0', '--offsets', '0',
                 '--lengths', '1', '--out', str(out)])


def test_generate_writes_set_and_sample(tmp_path):
    assert main(['generate', 'cantor4', '--n', '2', '--out', str(tmp_path)]) == 0

    primitives = json.loads((tmp_path / 'set.json').read_text())['primitives']
    assert len(primitives) == 16
    lines = (tmp_path / 'measure.csv').read_text().splitlines()
    assert lines[0] == '# spacing=0.001'
    assert 'x,y,w' in lines
    assert 'GENERATOR=cantor4' in {line.lstrip('# ') for line in lines}


def test_invalid_generator_argument_exits_with_2(tmp_path, capsys):
    assert main(['generate', 'cantor4', '--n', '9', '--out', str(tmp_path)]) == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error['error_code'] == 'core.0003'
    assert not (tmp_path / 'set.json').exists()


def test_segment_count_must_match_lengths(tmp_path):
    with pytest.raises(SystemExit) as exc_info:
        main(['generate', 'parallel_segments', '--k', '2', '--lengths', '1', '--offsets', '0', '--out', str(tmp_path)])
    assert exc_info.value.code == 2


def test_epsilon_out_of_range_exits_with_2(tmp_path, capsys):
    config = tmp_path / 'run.cfg'
    config.write_text('EPSILON=1.5\n')
    assert main(['energies', '--config', str(config), '--out', str(tmp_path / 'out')]) == 2
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])['error_code'] == 'core.0006'


def test_missing_config_exits_with_2(tmp_path):
    assert main(['corona', '--config', str(tmp_path / 'absent.cfg'), '--out', str(tmp_path)]) == 2


def test_missing_set_file_exits_with_2(tmp_path):
    assert main(['favard', str(tmp_path / 'absent.json'), '--out', str(tmp_path)]) == 2


def test_favard_of_unit_segment(tmp_path, capsys):
    assert generate_segment(tmp_path / 'set') == 0
    assert main(['favard', str(tmp_path / 'set' / 'set.json'), '--n-angles', '1024', '--out', str(tmp_path)]) == 0

    result = json.loads((tmp_path / 'favard.json').read_text())
    assert result['favard'] == pytest.approx(2 / math.pi, rel=1e-4)
    assert result['n_angles'] == 1024
    assert (tmp_path / 'favard.svg').exists()
    rows = [line for line in (tmp_path / 'favard.csv').read_text().splitlines() if not line.startswith('#')]
    assert rows[0] == 'theta,length'
    assert len(rows) == 1025
    assert 'favard=' in capsys.readouterr().out


def test_favard_svg_is_reproducible(tmp_path):
    assert generate_segment(tmp_path / 'set') == 0
    for name in ('first', 'second'):
        assert main(['favard', str(tmp_path / 'set' / 'set.json'), '--n-angles', '64',
                     '--out', str(tmp_path / name)]) == 0
    assert (tmp_path / 'first' / 'favard.svg').read_bytes() == (tmp_path / 'second' / 'favard.svg').read_bytes()


def test_project_unit_segment(tmp_path):
    assert generate_segment(tmp_path / 'set') == 0
    assert main(['project', str(tmp_path / 'set' / 'set.json'), '--theta', '0', '--bin-width', '0.01',
                 '--out', str(tmp_path)]) == 0

    result = json.loads((tmp_path / 'projection.json').read_text())
    assert result['projection_length'] == pytest.approx(1.0)
    assert result['sup_norm'] == pytest.approx(1.0, rel=0.15)
    assert result['degenerate'] is False
    assert (tmp_path / 'density.csv').exists()


def test_iterate_directions_writes_every_file(tmp_path, capsys):
    config = tmp_path / 'run.cfg'
    config.write_text('EPSILON=0.25\nJ_HALFWIDTH=0.0625\nG_DEPTH=8\n')
    assert main(['iterate-directions', '--config', str(config), '--out', str(tmp_path / 'out')]) == 0

    for name in ('iteration.csv', 'g_final.txt', 'gaps_before.json', 'gaps_after.json'):
        assert (tmp_path / 'out' / name).exists()
    assert (tmp_path / 'out' / 'g_final.txt').read_text().startswith('depth=8;hex=')
    assert 'k0=' in capsys.readouterr().out


def test_energies_writes_lattice_and_energies(tmp_path):
    config = tmp_path / 'run.cfg'
    config.write_text('LATTICE_DEPTH=2\nSAMPLE_SPACING=0.015625\nA=10\n')
    assert main(['energies', '--config', str(config), '--out', str(tmp_path / 'out')]) in (0, 1)

    assert (tmp_path / 'out' / 'lattice.jsonl').read_text().count('\n') > 0
    assert (tmp_path / 'out' / 'energies.csv').exists()


def test_corona_writes_trees(tmp_path):
    config = tmp_path / 'run.cfg'
    config.write_text('LATTICE_DEPTH=2\nSAMPLE_SPACING=0.015625\nA=10\n')
    assert main(['corona', '--config', str(config), '--out', str(tmp_path / 'out')]) in (0, 1)

    corona = json.loads((tmp_path / 'out' / 'corona.json').read_text())
    assert corona['A'] == 10.0
    assert corona['trees']
    assert set(corona['trees'][0]) == {'root', 'layer', 'tree', 'bce'}
    assert corona['trees'][0]['root'] in corona['trees'][0]['tree']
