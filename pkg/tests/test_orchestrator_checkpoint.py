import json

import pytest

from osmolearn.core.core_exceptions import SchemaException, StorageException
from osmolearn.model.model_types import init_agent_model
from osmolearn.orchestrator.orchestrator_checkpoint import MANIFEST_NAME, checkpoint, checkpoint_filename, restore


@pytest.fixture
def models(rng):
    return {agent_id: init_agent_model(agent_id, n, rng.spawn('agent', agent_id), hidden_size=4, embedding_size=3)
            for agent_id, n in (('0', 1), ('4', 2))}


def test_checkpoint_restore_checkpoint_is_byte_identical(tmp_path, models):
    checkpoint(models, tmp_path / 'a')
    checkpoint(restore(tmp_path / 'a', expected_agents=['0', '4']), tmp_path / 'b')
    for name in (MANIFEST_NAME, checkpoint_filename('0'), checkpoint_filename('4')):
        assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()


def test_manifest_lists_agents(tmp_path, models):
    checkpoint(models, tmp_path)
    manifest = json.loads((tmp_path / MANIFEST_NAME).read_text(encoding='utf-8'))
    assert manifest['agents'] == ['0', '4']
    assert manifest['files']['4'] == 'agent_4.ckpt'


def test_mismatched_agents(tmp_path, models):
    checkpoint(models, tmp_path)
    with pytest.raises(SchemaException):
        restore(tmp_path, expected_agents=['0', '1'])


def test_swapped_files(tmp_path, models):
    checkpoint(models, tmp_path)
    (tmp_path / 'agent_0.ckpt').write_bytes((tmp_path / 'agent_4.ckpt').read_bytes())
    with pytest.raises(SchemaException):
        restore(tmp_path)


def test_missing_manifest(tmp_path):
    with pytest.raises(StorageException):
        restore(tmp_path)
