"""
Hypertoric Duality Engine - Configuration Module
Handles engine settings, truncation orders and the frozen calibration constants
"""

import os
from dotenv import load_dotenv
from typing import Dict, Any

# Load environment variables from .env file (for local development)
load_dotenv()

# Exact arithmetic
LATTICE_BASE_SCALE = int(os.getenv('LATTICE_BASE_SCALE', '2'))  # hosts x^(1/2) exponents

# q-series truncation
DEFAULT_Q_ORDER = int(os.getenv('DEFAULT_Q_ORDER', '4'))
MAX_Q_ORDER = int(os.getenv('MAX_Q_ORDER', '16'))  # ceiling when build_stab raises the order

# Random slopes
RANDOM_SLOPE_MAX_DENOMINATOR = int(os.getenv('RANDOM_SLOPE_MAX_DENOMINATOR', '7'))
RANDOM_SLOPE_ATTEMPTS = int(os.getenv('RANDOM_SLOPE_ATTEMPTS', '25'))
DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '0'))

# Parallel fills
MAX_WORKERS = int(os.getenv('MAX_WORKERS', '4'))

# Cache Configuration
CACHE_DIR = os.getenv('CACHE_DIR', 'cache')
CACHE_TTL_HOURS = int(os.getenv('CACHE_TTL_HOURS', '168'))
ENABLE_CACHE = os.getenv('ENABLE_CACHE', 'true').lower() == 'true'

# Output Configuration
OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'outputs')
EXPORT_FORMATS = ['json', 'csv', 'xlsx']

# Logging
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_FILE = os.getenv('LOG_FILE', 'hypertoric.log')

# Axis labels used on every character lattice
HBAR_AXIS = 'h'
SPECIALIZED_AXIS = 'tau'

# Frozen conventions; echoed into every report
CALIBRATION: Dict[str, Any] = {
    'nonzero_coordinate': 'y_when_beta_eta_positive',  # u_e|_p = h iff <beta^p_e, eta> > 0
    'tangent_twist': 'h',  # TX = T^1/2 + h (T^1/2)^dual
    'attracting_class': 'koszul_inverse',  # prod over T_<0 of (1 - w^-1)
    'localization_denominator': 'cotangent',  # wedge of T^dual
    'specialization': 'zeta_times_eta',  # mu -> <mu_a, zeta> + <mu_g, eta>
    'polarization': 'standard',  # all x; intertwiner-check also reports the opposite choice
    'square_root_branch': 'positive',
    'theta_automorphy': 'theta(qx) = -q^(-1/2) x^-1 theta(x)',
}

# Create necessary directories
os.makedirs(CACHE_DIR, exist_ok=True)
os.makedirs(OUTPUT_DIR, exist_ok=True)
