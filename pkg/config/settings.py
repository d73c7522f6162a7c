import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
BASE_DIR = Path(__file__).parent.parent
load_dotenv(BASE_DIR / '.env')

# Base paths
FIXTURES_DIR = BASE_DIR / "fixtures"
LOGS_DIR = BASE_DIR / "logs"

# Ensure directories exist
LOGS_DIR.mkdir(parents=True, exist_ok=True)

# Parallel workers (census, per-degree Hilbert pieces)
WORKER_CONFIG = {
    'workers': int(os.getenv('ADHMLAB_WORKERS', 1)),
    'backend': os.getenv('ADHMLAB_JOBLIB_BACKEND', 'loky'),
}

CENSUS_CONFIG = {
    'max_points': int(os.getenv('ADHMLAB_CENSUS_MAX_POINTS', 10 ** 8)),
}

HILBERT_CONFIG = {
    # Largest monomial basis allowed in a single degree
    'work_limit': int(os.getenv('ADHMLAB_HILBERT_WORK_LIMIT', 3000)),
}

NILPOTENT_CONFIG = {
    'delta_rule': os.getenv('ADHMLAB_DELTA_RULE', 'golden'),
    'golden_table': FIXTURES_DIR / 'square_zero_k4_n5.json',
}

REPORT_CONFIG = {
    'include_timing': os.getenv('ADHMLAB_REPORT_TIMING', 'false').lower() == 'true',
    'default_seed': int(os.getenv('ADHMLAB_SEED', 0)),
}

# Logging Configuration
LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'detailed': {
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        },
        'colored': {
            '()': 'colorlog.ColoredFormatter',
            'format': '%(log_color)s%(levelname)s%(reset)s - %(name)s - %(message)s',
            'log_colors': {
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'bold_red',
            },
        }
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'level': 'WARNING',
            'formatter': 'colored',
            'stream': 'ext://sys.stderr'
        },
        'file': {
            'class': 'logging.FileHandler',
            'level': 'DEBUG',
            'formatter': 'detailed',
            'filename': str(LOGS_DIR / 'adhmlab.log'),
            'mode': 'a'
        }
    },
    'loggers': {
        'adhmlab': {
            'level': 'DEBUG',
            'handlers': ['console', 'file'],
            'propagate': False
        }
    }
}
