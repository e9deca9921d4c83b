import json
import math

import numpy as np
import pytest

from conftest import A, B, EOS, LN_01, LN_02, LN_03, LN_06, LN_07
from errores import ErrorFormato, ErrorRuta, ErrorValidacion
from red_trie import cargar_red, guardar_red, paso_modelo_trie, red_aleatoria
from tipos_busqueda import CENTINELA


def _escribir(tmp_path, datos, nombre='red.json'):
    ruta = tmp_path / nombre
    ruta.write_text(json.dumps(datos), encoding='utf-8')
    return str(ruta)


def _red_minima(arcos_raiz):
    return {'vocab_size': 4, 'eos_id': 3, 'bos_id': 0, 'root': {'arcs': arcos_raiz}}


class TestCargarRed:

    def test_red_diminuta(self, red_diminuta):
        assert red_diminuta.vocab.tamano == 4
        assert red_diminuta.vocab.eos_id == EOS
        assert red_diminuta.profundidad == 2
        emitibles = [t for t in range(4) if t != red_diminuta.vocab.bos_id]
        assert len(emitibles) == 3

    def test_suma_09_se_rechaza(self, tmp_path):
        datos = _red_minima({'3': {'logprob': math.log(0.9), 'child': None}})
        with pytest.raises(ErrorValidacion):
            cargar_red(_escribir(tmp_path, datos))

    def test_eos_con_hijo_se_rechaza(self, tmp_path):
        hijo = {'arcs': {'3': {'logprob': 0.0, 'child': None}}}
        datos = _red_minima({'3': {'logprob': 0.0, 'child': hijo}})
        with pytest.raises(ErrorValidacion):
            cargar_red(_escribir(tmp_path, datos))

    def test_arco_sin_hijo_se_rechaza(self, tmp_path):
        datos = _red_minima({'1': {'logprob': math.log(0.5), 'child': None},
                             '3': {'logprob': math.log(0.5), 'child': None}})
        with pytest.raises(ErrorValidacion):
            cargar_red(_escribir(tmp_path, datos))

    def test_renormaliza_dentro_de_tolerancia(self, tmp_path):
        hoja = {'arcs': {'3': {'logprob': 0.0, 'child': None}}}
        datos = _red_minima({'1': {'logprob': math.log(0.5 + 4e-7), 'child': hoja},
                             '3': {'logprob': math.log(0.5), 'child': None}})
        red = cargar_red(_escribir(tmp_path, datos))
        suma = sum(math.exp(lp) for lp, _ in red.raiz.arcos.values())
        assert suma == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("datos", [
        {'vocab_size': 4, 'eos_id': 3, 'bos_id': 0},
        {'vocab_size': 'cuatro', 'eos_id': 3, 'bos_id': 0, 'root': {'arcs': {}}},
        _red_minima({'x': {'logprob': 0.0, 'child': None}}),
        _red_minima({'3': {'logprob': 'cero', 'child': None}}),
        _red_minima({'9': {'logprob': 0.0, 'child': None}}),
        {'vocab_size': 4, 'eos_id': 3, 'bos_id': 0, 'root': []},
        [1, 2, 3],
    ])
    def test_esquema_invalido(self, tmp_path, datos):
        with pytest.raises(ErrorFormato):
            cargar_red(_escribir(tmp_path, datos))

    def test_json_invalido(self, tmp_path):
        ruta = tmp_path / 'roto.json'
        ruta.write_text('{"vocab_size": 4,', encoding='utf-8')
        with pytest.raises(ErrorFormato):
            cargar_red(str(ruta))

    def test_guardar_y_cargar_conserva_la_red(self, tmp_path, red_diminuta):
        ruta = str(tmp_path / 'copia.json')
        guardar_red(red_diminuta, ruta)
        copia = cargar_red(ruta)
        for prefijo in ([], [A], [B], [A, B]):
            assert np.array_equal(paso_modelo_trie(copia, (), prefijo), paso_modelo_trie(red_diminuta, (), prefijo))


class TestPasoModeloTrie:

    def test_raiz(self, red_diminuta):
        logprobs = paso_modelo_trie(red_diminuta, (A,), [])
        assert logprobs[0] == CENTINELA
        assert logprobs[A] == pytest.approx(LN_06)
        assert logprobs[B] == pytest.approx(LN_03)
        assert logprobs[EOS] == pytest.approx(LN_01)

    def test_prefijo_a(self, red_diminuta):
        logprobs, atencion = red_diminuta.paso((A,), [A])
        assert atencion is None
        np.testing.assert_allclose(logprobs[[A, B, EOS]], [LN_01, LN_02, LN_07])

    def test_profundidad_maxima_solo_eos(self, red_diminuta):
        logprobs = paso_modelo_trie(red_diminuta, (), [A, A])
        assert logprobs[EOS] == 0.0
        assert all(logprobs[t] == CENTINELA for t in (0, A, B))

    @pytest.mark.parametrize("prefijo", [[EOS], [0], [A, A, A], [A, EOS]])
    def test_prefijo_fuera_de_la_red(self, red_diminuta, prefijo):
        with pytest.raises(ErrorRuta):
            paso_modelo_trie(red_diminuta, (), prefijo)

    def test_nodos_normalizados(self, red_diminuta):
        pendientes = [red_diminuta.raiz]
        while pendientes:
            nodo = pendientes.pop()
            assert abs(sum(math.exp(lp) for lp, _ in nodo.arcos.values()) - 1.0) < 1e-9
            pendientes.extend(hijo for _, hijo in nodo.arcos.values() if hijo is not None)


class TestRedAleatoria:

    def test_determinista_y_normalizada(self):
        a = red_aleatoria(3, 4, 4)
        b = red_aleatoria(3, 4, 4)
        for prefijo in ([], [2], [3, 2], [2, 2, 3]):
            pa = paso_modelo_trie(a, (), prefijo)
            assert np.array_equal(pa, paso_modelo_trie(b, (), prefijo))
            validos = pa[pa > CENTINELA]
            assert abs(np.exp(validos).sum() - 1.0) < 1e-9
            assert pa[0] == CENTINELA

    def test_determinismo_en_mil_consultas(self):
        rng = np.random.default_rng(17)
        for semilla in (0, 7, 42):
            red = red_aleatoria(semilla, 5, 4)
            copia = red_aleatoria(semilla, 5, 4)
            for _ in range(1000):
                # Camino aleatorio por arcos que tienen hijo
                prefijo, nodo = [], red.raiz
                for _ in range(int(rng.integers(0, red.profundidad + 1))):
                    hijos = sorted(t for t, (_, hijo) in nodo.arcos.items() if hijo is not None)
                    if not hijos:
                        break
                    token = int(rng.choice(hijos))
                    prefijo.append(token)
                    nodo = nodo.arcos[token][1]
                fuente = rng.integers(2, 5, size=rng.integers(0, 4)).tolist()
                a = paso_modelo_trie(red, fuente, prefijo)
                b, _ = copia.paso((), tuple(prefijo))
                assert a.tobytes() == b.tobytes()
                assert paso_modelo_trie(red, fuente, prefijo).tobytes() == a.tobytes()

    def test_profundidad_forzada(self):
        red = red_aleatoria(5, 4, 2)
        logprobs = paso_modelo_trie(red, (), [2, 3])
        assert logprobs[1] == 0.0
        assert np.sum(logprobs > CENTINELA) == 1
