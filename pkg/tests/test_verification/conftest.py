import pytest

from verification.services import VerificationService


@pytest.fixture
def verification_service(request_container) -> VerificationService:
    return request_container.get(VerificationService)
