import math

import numpy as np
import pytest

from busqueda_haz import decodificar, decodificar_voraz, expandir_haz, mejor_exhaustivo, preparar_contexto
from conftest import A, B, EOS, LN_01, LN_03, LN_06, S_A_EOS, S_B_A_EOS
from errores import ErrorContrato, ErrorPresupuesto, ErrorSinSalida
from modelo_hash import crear_modelo_hash
from prediccion_longitud import predictor_fijo
from puntuacion import puntuar
from red_trie import NodoTrie, RedTrie, red_aleatoria
from tipos_busqueda import (CENTINELA, ConfigDecodificacion, ContextoOracion, CriterioParada, Haz, Hipotesis,
                            MetodoPuntuacion, TipoMetodo, Vocabulario)

METODOS_ORACULO = [
    MetodoPuntuacion(TipoMetodo.DEFAULT),
    MetodoPuntuacion(TipoMetodo.LENGTH_NORM),
    MetodoPuntuacion(TipoMetodo.GNMT, alpha=0.6, beta=0.0),
    MetodoPuntuacion(TipoMetodo.WORD_REWARD, r=0.7),
    MetodoPuntuacion(TipoMetodo.BWR, r=0.7),
    MetodoPuntuacion(TipoMetodo.ADAR),
    MetodoPuntuacion(TipoMetodo.BP_NORM),
]


class _ModeloFijo:
    """Devuelve siempre la misma distribución."""

    def __init__(self, logprobs, eos_id=1):
        self.vocab = Vocabulario(tamano=len(logprobs), eos_id=eos_id, bos_id=0)
        self.logprobs = np.array(logprobs, dtype=float)

    def paso(self, fuente, prefijo):
        return self.logprobs.copy(), None


def _haz_inicial():
    return Haz(items=(Hipotesis(),), paso=0)


class TestExpandirHaz:

    def test_primer_paso_b2(self, red_diminuta, ctx_diminuto):
        haz = expandir_haz(_haz_inicial(), red_diminuta, ctx_diminuto, 2)
        assert [h.tokens for h in haz.items] == [(A,), (B,)]
        assert [h.puntaje for h in haz.items] == pytest.approx([LN_06, LN_03])
        assert haz.paso == 1

    def test_segundo_paso_b2(self, red_diminuta, ctx_diminuto):
        haz = expandir_haz(_haz_inicial(), red_diminuta, ctx_diminuto, 2)
        haz = expandir_haz(haz, red_diminuta, ctx_diminuto, 2)
        assert [h.tokens for h in haz.items] == [(A, EOS), (B, A)]
        assert [h.puntaje for h in haz.items] == pytest.approx([S_A_EOS, S_B_A_EOS])
        assert haz.items[0].terminada and not haz.items[1].terminada

    def test_haz_mayor_que_el_pool(self, red_diminuta, ctx_diminuto):
        haz = expandir_haz(_haz_inicial(), red_diminuta, ctx_diminuto, 10)
        assert [h.tokens for h in haz.items] == [(A,), (B,), (EOS,)]
        assert [h.puntaje for h in haz.items] == pytest.approx([LN_06, LN_03, LN_01])

    def test_terminados_pasan_sin_cambios(self, red_diminuta, ctx_diminuto):
        haz = expandir_haz(_haz_inicial(), red_diminuta, ctx_diminuto, 3)
        terminada = haz.items[2]
        haz = expandir_haz(haz, red_diminuta, ctx_diminuto, 10)
        assert any(h is terminada for h in haz.items)
        puntajes = [h.puntaje for h in haz.items]
        assert puntajes == sorted(puntajes, reverse=True)

    def test_desempate_por_rango_y_token(self, ctx_diminuto):
        modelo = _ModeloFijo([CENTINELA, -5.0, math.log(0.5), math.log(0.5)])
        haz = expandir_haz(_haz_inicial(), modelo, ctx_diminuto, 2)
        assert [h.tokens for h in haz.items] == [(2,), (3,)]
        haz = expandir_haz(haz, modelo, ctx_diminuto, 3)
        assert [h.tokens for h in haz.items] == [(2, 2), (2, 3), (3, 2)]

    def test_sin_salida(self, ctx_diminuto):
        with pytest.raises(ErrorSinSalida):
            expandir_haz(_haz_inicial(), _ModeloFijo([CENTINELA] * 3), ctx_diminuto, 2)

    def test_haz_vacio(self, red_diminuta, ctx_diminuto):
        with pytest.raises(ErrorContrato):
            expandir_haz(Haz(items=()), red_diminuta, ctx_diminuto, 2)


class TestDecodificar:

    def test_default_cima_terminada(self, red_diminuta, ctx_diminuto):
        config = ConfigDecodificacion(tam_haz=2, parada=CriterioParada.CIMA_TERMINADA)
        resultado = decodificar(red_diminuta, ctx_diminuto, config, MetodoPuntuacion())
        assert resultado.mejor.tokens == (A, EOS)
        assert resultado.mejor.puntaje == pytest.approx(S_A_EOS, abs=1e-12)
        assert resultado.pasos == 2

    def test_length_norm_hasta_maximo(self, red_diminuta, ctx_diminuto):
        config = ConfigDecodificacion(tam_haz=3, parada=CriterioParada.LONGITUD_MAXIMA)
        resultado = decodificar(red_diminuta, ctx_diminuto, config, MetodoPuntuacion(TipoMetodo.LENGTH_NORM))
        assert resultado.mejor.tokens == (A, EOS)
        assert resultado.mejor_puntaje_ajustado == pytest.approx(-0.4337502838523616, abs=1e-12)
        ajustados = {h.tokens: s for h, s in resultado.terminados}
        assert set(ajustados) == {(EOS,), (A, EOS), (B, EOS), (B, A, EOS), (A, B, EOS)}
        assert ajustados[(B, A, EOS)] == pytest.approx(-0.6323733282952938, abs=1e-12)
        assert ajustados[(B, EOS)] == pytest.approx(LN_03, abs=1e-12)
        assert ajustados[(EOS,)] == pytest.approx(LN_01, abs=1e-12)
        assert resultado.en_haz == (True, True, False, True, True)
        assert resultado.posiciones_eos == (1, 2, 3)
        assert resultado.pasos == 12
        assert not resultado.forzada

    def test_mejor_es_el_maximo_del_pool(self, red_diminuta, ctx_diminuto):
        config = ConfigDecodificacion(tam_haz=4)
        resultado = decodificar(red_diminuta, ctx_diminuto, config, MetodoPuntuacion(TipoMetodo.WORD_REWARD, r=1.0))
        assert resultado.mejor_puntaje_ajustado == max(s for _, s in resultado.terminados)
        posiciones = list(resultado.posiciones_eos)
        assert posiciones == sorted(posiciones)

    def test_b1_igual_a_voraz(self, red_diminuta, ctx_diminuto):
        config = ConfigDecodificacion(tam_haz=1, parada=CriterioParada.CIMA_TERMINADA)
        haz = decodificar(red_diminuta, ctx_diminuto, config, MetodoPuntuacion())
        voraz = decodificar_voraz(red_diminuta, ctx_diminuto, config)
        assert haz.mejor == voraz.mejor

    def test_fuerza_eos_en_el_limite(self):
        modelo = _ModeloFijo([CENTINELA, CENTINELA, -1e-22])
        ctx = ContextoOracion(fuente=(2,), l_pred=1.0, longitud_maxima=4)
        resultado = decodificar(modelo, ctx, ConfigDecodificacion(tam_haz=1), MetodoPuntuacion())
        assert resultado.forzada
        assert resultado.mejor.tokens == (2, 2, 2, 2, 1)
        assert resultado.mejor.terminada
        assert resultado.posiciones_eos == ()
        assert resultado.pasos == 4

    def test_adar_con_forzado_tiene_recompensas(self):
        modelo = _ModeloFijo([CENTINELA, CENTINELA, -1e-22])
        ctx = ContextoOracion(fuente=(2,), l_pred=9.0, longitud_maxima=4)
        resultado = decodificar(modelo, ctx, ConfigDecodificacion(tam_haz=1), MetodoPuntuacion(TipoMetodo.ADAR))
        assert len(resultado.recompensas_adaptativas) == 5

    def test_optima_sin_regla(self, red_diminuta, ctx_diminuto):
        config = ConfigDecodificacion(tam_haz=2, parada=CriterioParada.OPTIMA)
        with pytest.raises(ErrorContrato):
            decodificar(red_diminuta, ctx_diminuto, config, MetodoPuntuacion(TipoMetodo.GNMT, alpha=0.1, beta=0.0))

    def test_reinicia_recompensas(self, red_diminuta, ctx_diminuto):
        ctx_diminuto.recompensas_adaptativas.extend([9.0, 9.0])
        config = ConfigDecodificacion(tam_haz=2, parada=CriterioParada.CIMA_TERMINADA)
        resultado = decodificar(red_diminuta, ctx_diminuto, config, MetodoPuntuacion(TipoMetodo.ADAR))
        assert len(ctx_diminuto.recompensas_adaptativas) == resultado.pasos
        assert 9.0 not in ctx_diminuto.recompensas_adaptativas

    def test_pool_crece_con_el_haz(self):
        modelo = crear_modelo_hash(3, 12)
        for fuente in ([2, 3, 4], [5, 6], [7, 8, 9, 10]):
            tamanos = []
            for b in (1, 2, 4, 8):
                ctx = ContextoOracion(fuente=fuente, l_pred=len(fuente), longitud_maxima=8)
                resultado = decodificar(modelo, ctx, ConfigDecodificacion(tam_haz=b), MetodoPuntuacion())
                assert len(resultado.en_haz) == len(resultado.terminados)
                assert len(resultado.posiciones_eos) == min(sum(resultado.en_haz), 3)
                assert resultado.pasos == 8
                tamanos.append(len(resultado.terminados))
            # Antes del paso 8 el logit de </eos> queda bajo todo token de contenido:
            # cada elemento vivo del haz aporta un terminado por paso
            assert tamanos == [1 + 7 * b for b in (1, 2, 4, 8)]
            assert tamanos == sorted(tamanos)

    def test_pool_incluye_eos_fuera_del_haz(self, red_diminuta, ctx_diminuto):
        resultado = decodificar(red_diminuta, ctx_diminuto, ConfigDecodificacion(tam_haz=2), MetodoPuntuacion())
        # (EOS,) queda fuera del primer haz pero es candidato terminado
        haz = expandir_haz(_haz_inicial(), red_diminuta, ctx_diminuto, 2)
        assert (EOS,) not in [h.tokens for h in haz.items]
        assert [h.tokens for h, _ in resultado.terminados] == [(EOS,), (A, EOS), (B, EOS), (B, A, EOS)]
        assert [s for _, s in resultado.terminados] == pytest.approx([LN_01, S_A_EOS, 2 * LN_03, S_B_A_EOS])
        assert resultado.en_haz == (False, True, False, True)
        assert resultado.posiciones_eos == (2, 3)
        assert resultado.mejor.tokens == (A, EOS)
        assert resultado.pasos == 12

    def test_parada_optima_antes_que_longitud_maxima(self):
        # </eos> cierra con log 0.5; el mejor vivo queda en log 0.3 y ya no puede superarlo
        modelo = _ModeloFijo([CENTINELA, math.log(0.5), math.log(0.3), math.log(0.2)])
        metodo = MetodoPuntuacion(TipoMetodo.BWR, r=0.2)
        ctx = ContextoOracion(fuente=(2,), l_pred=1.0, longitud_maxima=12)
        optima = decodificar(modelo, ctx, ConfigDecodificacion(tam_haz=2, parada=CriterioParada.OPTIMA), metodo)
        haz = expandir_haz(_haz_inicial(), modelo, ctx, 2)
        assert any(not h.terminada for h in haz.items)
        assert optima.pasos == 1

        completa = decodificar(modelo, ctx, ConfigDecodificacion(tam_haz=2), metodo)
        assert completa.pasos == 12
        assert optima.mejor.tokens == completa.mejor.tokens == (1,)
        assert optima.mejor_puntaje_ajustado == completa.mejor_puntaje_ajustado
        assert optima.mejor_puntaje_ajustado == pytest.approx(math.log(0.5) + 0.2)


class TestDecodificarVoraz:

    def test_red_diminuta(self, red_diminuta, ctx_diminuto):
        resultado = decodificar_voraz(red_diminuta, ctx_diminuto)
        assert resultado.mejor.tokens == (A, EOS)
        assert resultado.mejor.puntaje == pytest.approx(S_A_EOS, abs=1e-12)
        assert resultado.posiciones_eos == (2,)

    def test_eos_inmediato(self, ctx_diminuto):
        modelo = _ModeloFijo([CENTINELA, math.log(0.6), math.log(0.4)])
        assert decodificar_voraz(modelo, ctx_diminuto).mejor.tokens == (1,)

    def test_hash_igual_a_haz_de_uno(self):
        modelo = crear_modelo_hash(21, 30)
        config = ConfigDecodificacion(tam_haz=1, parada=CriterioParada.CIMA_TERMINADA)
        flujo = np.random.default_rng(8)
        for _ in range(200):
            fuente = flujo.integers(2, 30, size=flujo.integers(1, 8)).tolist()
            ctx = preparar_contexto(fuente, config)
            haz = decodificar(modelo, ctx, config, MetodoPuntuacion())
            voraz = decodificar_voraz(modelo, preparar_contexto(fuente, config), config)
            # Cada paso del haz de uno aporta exactamente un </eos> al pool
            assert len(haz.terminados) == voraz.pasos
            if voraz.forzada:
                assert not any(haz.en_haz)
                continue
            # El candidato que cierra el haz de uno es la cadena voraz
            cierre, _ = haz.terminados[-1]
            assert haz.en_haz[-1]
            assert cierre.tokens == voraz.mejor.tokens
            assert cierre.puntaje == voraz.mejor.puntaje
            assert haz.mejor_puntaje_ajustado >= voraz.mejor.puntaje


class TestMejorExhaustivo:

    def test_default(self, red_diminuta, ctx_diminuto):
        mejor = mejor_exhaustivo(red_diminuta, ctx_diminuto, MetodoPuntuacion(), 2)
        assert mejor.tokens == (A, EOS)
        assert mejor.puntaje == pytest.approx(S_A_EOS, abs=1e-12)

    def test_recompensa_por_palabra(self, red_diminuta, ctx_diminuto):
        metodo = MetodoPuntuacion(TipoMetodo.WORD_REWARD, r=1.0)
        mejor = mejor_exhaustivo(red_diminuta, ctx_diminuto, metodo, 2)
        assert mejor.tokens == (A, EOS)
        assert puntuar(mejor, ctx_diminuto, metodo).ajustado == pytest.approx(1.1324994322952768, abs=1e-12)

    def test_profundidad_cero(self, red_diminuta, ctx_diminuto):
        assert mejor_exhaustivo(red_diminuta, ctx_diminuto, MetodoPuntuacion(), 0).tokens == (EOS,)

    def test_presupuesto(self, ctx_diminuto):
        with pytest.raises(ErrorPresupuesto):
            mejor_exhaustivo(crear_modelo_hash(1, 50), ctx_diminuto, MetodoPuntuacion(), 4)

    def test_empate_lexicografico(self, ctx_diminuto):
        # Dos ramas idénticas: gana la de token menor
        hoja = NodoTrie(arcos={1: (0.0, None)})
        raiz = NodoTrie(arcos={2: (math.log(0.4), hoja), 3: (math.log(0.4), hoja), 1: (math.log(0.2), None)})
        red = RedTrie(vocab=Vocabulario(4, 1, 0), raiz=raiz, profundidad=1)
        assert mejor_exhaustivo(red, ctx_diminuto, MetodoPuntuacion(), 1).tokens == (2, 1)


def _verificar_oraculo(semilla):
    rng = np.random.default_rng(semilla)
    tam_vocab = int(rng.integers(3, 5))
    profundidad = int(rng.integers(1, 6))
    red = red_aleatoria(semilla, tam_vocab, profundidad)
    config = ConfigDecodificacion(tam_haz=64, parada=CriterioParada.LONGITUD_MAXIMA)
    l_pred = float(rng.uniform(0.5, 6.0))
    for metodo in METODOS_ORACULO:
        ctx = ContextoOracion(fuente=(2,), l_pred=l_pred, longitud_maxima=config.longitud_maxima(1))
        resultado = decodificar(red, ctx, config, metodo)
        oraculo = mejor_exhaustivo(red, ctx, metodo, profundidad)
        assert resultado.mejor.tokens == oraculo.tokens, (semilla, metodo)
        assert resultado.mejor_puntaje_ajustado == puntuar(oraculo, ctx, metodo).ajustado, (semilla, metodo)


class TestEquivalenciaOraculo:

    @pytest.mark.parametrize("semilla", range(40))
    def test_redes_aleatorias(self, semilla):
        _verificar_oraculo(semilla)

    @pytest.mark.lento
    def test_quinientas_redes(self):
        for semilla in range(1000, 1500):
            _verificar_oraculo(semilla)


class TestPrepararContexto:

    def test_con_predictor(self):
        ctx = preparar_contexto([4, 5, 6], ConfigDecodificacion(tam_haz=2), predictor=predictor_fijo(2.6))
        assert ctx.l_pred == pytest.approx(7.8)
        assert ctx.longitud_maxima == 16

    def test_con_gr_del_metodo(self):
        ctx = preparar_contexto([4, 5], ConfigDecodificacion(tam_haz=2), MetodoPuntuacion(TipoMetodo.BWR, r=1.0, gr=1.5))
        assert ctx.l_pred == 3.0

    def test_por_defecto(self):
        assert preparar_contexto([4, 5], ConfigDecodificacion(tam_haz=2)).l_pred == 2.0
