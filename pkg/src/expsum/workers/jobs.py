from expsum.models.cohomology import SymVector, VkCoords
from expsum.models.cyclotomic import CycloElem
from expsum.services.oracle_sums import OracleService
from expsum.services.sympow_cohom import SympowCohomService


def mk_power_sum_level(p: int, k: int, s: int) -> CycloElem:
    """Background job to compute the level-s power sum of M_k over F_{p^s}."""
    oracle_service = OracleService()
    return oracle_service.power_sum_level(p, k, s)


def reduce_sym_vector(vector: SymVector) -> VkCoords:
    """Background job to reduce one Frobenius image modulo d_a."""
    sympow_service = SympowCohomService()
    return sympow_service.reduce(vector)
