import os
from dotenv import load_dotenv

# Cargar variables de entorno desde .env
load_dotenv()


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value not in (None, '') else default


def _env_float(name, default):
    value = os.environ.get(name)
    return float(value) if value not in (None, '') else default


class Config:
    """Configuración base del pipeline gaitpd"""

    # Rutas de datos (la descarga de gaitpdb es manual)
    DATA_ROOT = os.environ.get('DATA_ROOT', 'data/gaitpdb')
    DEMOGRAPHICS_FILE = os.environ.get('DEMOGRAPHICS_FILE', 'data/gaitpdb/demographics.txt')
    EXCLUSIONS_FILE = os.environ.get('EXCLUSIONS_FILE') or None
    OUTPUT_DIR = os.environ.get('OUTPUT_DIR', 'runs')
    SOURCE_URL = 'https://physionet.org/content/gaitpdb/1.0.0/'

    # Señal
    SAMPLE_RATE_HZ = _env_int('SAMPLE_RATE_HZ', 100)
    TIME_TOLERANCE_S = _env_float('TIME_TOLERANCE_S', 1e-6)

    # Segmentación
    WINDOW_LEN = _env_int('WINDOW_LEN', 100)
    WINDOW_STRIDE = _env_int('WINDOW_STRIDE', 50)
    NORMALIZE = os.environ.get('NORMALIZE', '0').lower() in ('1', 'true', 'yes')

    # Entrenamiento
    BATCH_SIZE = _env_int('BATCH_SIZE', 800)
    LEARNING_RATE = _env_float('LEARNING_RATE', 0.001)
    PATIENCE = _env_int('PATIENCE', 10)
    LR_HALVINGS = _env_int('LR_HALVINGS', 4)
    MAX_EPOCHS_PER_ROUND = _env_int('MAX_EPOCHS_PER_ROUND', 500)

    # Validación cruzada
    CV_FOLDS = _env_int('CV_FOLDS', 10)
    SEED = _env_int('SEED', 42)
    # Núcleos lógicos; run_cv usa como máximo un proceso por fold
    JOBS = _env_int('JOBS', os.cpu_count() or 1)

    # Configuración de la aplicación
    APP_NAME = 'gaitpd'
    APP_VERSION = '1.0.0'
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO').upper()

    @staticmethod
    def init_app(output_dir=None):
        """Inicializar configuraciones adicionales"""
        # Crear carpeta de salida si no existe
        os.makedirs(output_dir or Config.OUTPUT_DIR, exist_ok=True)
