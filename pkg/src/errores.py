"""
Módulo: Errores del Motor de Búsqueda en Haz
Descripción: Jerarquía de excepciones compartida por los backends de modelo,
             la puntuación, los criterios de parada, el decodificador y la CLI
Autor: [Tu nombre]
Proyecto: Búsqueda en Haz con Parada Óptima
"""


class ErrorBusquedaHaz(Exception):
    """Raíz de todos los errores del proyecto"""


class ErrorContrato(ErrorBusquedaHaz):
    """Se violó una precondición de una operación (p. ej. extender una hipótesis terminada)"""


class ErrorRuta(ErrorBusquedaHaz):
    """El prefijo solicitado no existe en la red trie"""


class ErrorFormato(ErrorBusquedaHaz):
    """Archivo (red JSON o corpus JSONL) que no respeta el esquema"""


class ErrorValidacion(ErrorBusquedaHaz):
    """Archivo bien formado cuyo contenido rompe un invariante (sumas de probabilidad, eos con hijo)"""


class ErrorSinSalida(ErrorBusquedaHaz):
    """Todos los candidatos del haz quedaron en el centinela -1e30"""


class ErrorPresupuesto(ErrorBusquedaHaz):
    """La búsqueda exhaustiva superaría el límite de secuencias permitido"""


class ErrorUso(ErrorBusquedaHaz):
    """Combinación de opciones de línea de comandos inválida"""


class ErrorBusqueda(ErrorBusquedaHaz, LookupError):
    """El predictor oráculo no tiene longitud de referencia para la fuente pedida"""
