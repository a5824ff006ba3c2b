"""Proximal-point views of Blahut-Arimoto capacity computation and BICM-ID decoding."""

from .bicm import (
    ProxDecoderState,
    bit_marginals,
    build_binary_matrix,
    classic_decoder_update,
    classic_demapper_update,
    cost_J,
    decode,
    dist_from_coords,
    mu_c_bound,
    mu_m_bound,
    prox_decoder_update,
    prox_demapper_update,
)
from .capacity import (
    Algorithm,
    CapacityResult,
    IterationRecord,
    SolverConfig,
    ba_step,
    capacity_bounds,
    penalty_term,
    proximal_step,
    select_beta,
    solve_capacity,
)
from .channel import (
    BernoulliGaussianParams,
    Channel,
    binary_symmetric_channel,
    channel_from_matrix,
    channel_from_rows,
    conditional_divergence,
    discretize_bernoulli_gaussian,
    identity_channel,
    mutual_information,
    output_marginal,
)
from .estimators import BicmIdDecoder, ChannelCapacity
from .prob import fermi_dirac_divergence, kl_divergence, logit, sigmoid, symmetric_fd_distance
from .toy import build_toy_instance, random_toy_instance

__version__ = "0.1.0"
