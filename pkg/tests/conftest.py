"""Fixtures compartidas: red diminuta, contexto de oración y corpus pequeño."""

import os
import sys

import pytest

DIR_RAIZ = os.path.join(os.path.dirname(__file__), '..')
sys.path.insert(0, os.path.join(DIR_RAIZ, 'src'))

from red_trie import cargar_red  # noqa: E402
from tipos_busqueda import ContextoOracion  # noqa: E402

RUTA_RED_DIMINUTA = os.path.join(DIR_RAIZ, 'data', 'redes', 'diminuta.json')

# Tokens de la red diminuta
BOS, A, B, EOS = 0, 1, 2, 3

# Puntajes exactos de la red diminuta
LN_06 = -0.5108256237659907
LN_03 = -1.2039728043259361
LN_01 = -2.3025850929940455
LN_02 = -1.6094379124341003
LN_07 = -0.35667494393873245
LN_05 = -0.6931471805599453
S_A_EOS = -0.8675005677047232
S_B_A_EOS = -1.8971199848858813


@pytest.fixture
def ruta_red_diminuta():
    return RUTA_RED_DIMINUTA


@pytest.fixture
def red_diminuta():
    return cargar_red(RUTA_RED_DIMINUTA)


@pytest.fixture
def ctx_diminuto():
    return ContextoOracion(fuente=(A,), l_pred=2.0, longitud_maxima=12)
