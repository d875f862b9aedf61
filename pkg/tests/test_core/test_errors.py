import logging

import pytest
from pydantic import ValidationError

from core.errors import ApplicationError, CheckFailure, InvalidInputError, NotFoundError, PreconditionViolation
from core.exit_codes import resolve_exit_status
from core.log import configure_logging
from core.parallel import ordered_map
from core.settings import Settings
from gaps.errors import NotAGraph
from measures.models import PlanarSet


@pytest.mark.parametrize('exc, exit_code, error_code', [
    (InvalidInputError('Spec', 'bad'), 2, 'core.0003'),
    (PlanarSet.InvalidError('empty'), 2, 'core.0003'),
    (NotFoundError('file'), 2, 'core.0004'),
    (PlanarSet.NotFoundError('file x'), 2, 'core.0004'),
    (PreconditionViolation('spacing', 'negative'), 2, 'core.0005'),
    (CheckFailure('additivity', 'off', {}), 1, 'core.0001'),
    (NotAGraph((0.0, 0.0), (0.0, 1.0)), 1, 'gaps.0001'),
    (ApplicationError('other'), 1, 'core.0002'),
])
def test_exit_status_of_errors(exc, exit_code, error_code):
    status = resolve_exit_status(exc)
    assert status.exit_code == exit_code
    assert status.json()['error_code'] == error_code


def test_validation_error_is_a_usage_error():
    with pytest.raises(ValidationError) as exc_info:
        Settings(RHO=0.9)
    assert resolve_exit_status(exc_info.value).exit_code == 2


def test_foreign_errors_are_reraised():
    with pytest.raises(KeyError):
        resolve_exit_status(KeyError('x'))


def test_model_errors_name_the_model():
    assert str(PlanarSet.InvalidError('empty')) == 'PlanarSet invalid: empty'
    assert str(PlanarSet.NotFoundError()) == 'PlanarSet not found'


def test_status_json_carries_detail():
    assert resolve_exit_status(NotFoundError()).json('gone') == {
        'error_message': 'Resource not found', 'error_code': 'core.0004', 'detail': 'gone'}


@pytest.mark.parametrize('threads', [1, 4])
def test_ordered_map_keeps_input_order(threads):
    assert ordered_map(lambda x: x * x, range(20), threads) == [x * x for x in range(20)]


def test_configure_logging_replaces_handlers():
    configure_logging('DEBUG')
    configure_logging('WARNING')
    package_logger = logging.getLogger('gaps')
    assert len(package_logger.handlers) == 1
    assert package_logger.level == logging.WARNING
    with pytest.raises(ValueError):
        configure_logging('LOUD')
