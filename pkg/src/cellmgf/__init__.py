"""Coverage, ergodic rate and bit error probability of a downlink PPP
cellular network under shadowed kappa-mu, kappa-mu, eta-mu, Nakagami-m, Rice
and Rayleigh fading, computed through the moment generating function of the
SINR and checked against a point-process Monte Carlo simulator."""

__version__ = "0.1.0"
