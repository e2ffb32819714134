#!/usr/bin/env python3
"""
hyperseq API Backend

A Flask web API over the hypergeometric-type sequence toolkit.
Endpoints:
- GET /health - Health check
- POST /api/eval - Evaluate an expression at an index or on a range
- POST /api/rec - Derive an annihilating recurrence
- POST /api/product - Hadamard product of two expressions
- POST /api/equal - Decide equality of two expressions
- POST /api/normalize - Normal form of an expression
- POST /api/verify-rec - Check a recurrence on an index range
- GET /api/history - Journal of computed results
- GET /api/stats - Journal statistics
"""

from flask import Flask, jsonify, request
from flask_cors import CORS
import os
import sys
import json
import logging
from datetime import datetime

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from hyperseq import __version__
from hyperseq.cli import parse_range
from hyperseq.errors import DomainError, LoweringError, OrderBoundError, ParseError
from hyperseq.exactarith import format_rational
from hyperseq.hyperterm import hts_eval, hts_normalize
from hyperseq.parser import parse_hts, parse_recurrence
from hyperseq.product import hts_product
from hyperseq.recurrence import hts_equal, hts_to_recurrence, rec_verify
from hyperseq.render import FORMATS, render, to_json_data
from hyperseq.store import ResultStore

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Initialize Flask app
app = Flask(__name__)
CORS(app)  # Enable CORS for frontend access

# Initialize result journal
db = ResultStore(os.environ.get('HYPERSEQ_DB', 'hyperseq.db'))

# Largest index span accepted by /api/eval and /api/verify-rec
MAX_RANGE = 10000


class BadRequest(Exception):
    """Missing or malformed request field."""


def ok(data):
    return jsonify({
        'success': True,
        'data': data,
        'timestamp': datetime.now().isoformat()
    })


def error_response(e: Exception):
    """Map an exception onto the JSON error envelope and an HTTP status."""
    if isinstance(e, (ParseError, LoweringError, BadRequest)):
        status = 400
    elif isinstance(e, (DomainError, OrderBoundError)):
        status = 422
    else:
        logger.error(f"Unexpected error: {e}")
        status = 500
    body = {'success': False, 'error': str(e)}
    if isinstance(e, LoweringError):
        body['kind'] = e.kind
    return jsonify(body), status


def request_fields(*names):
    """JSON body with the required fields, plus var and format."""
    data = request.get_json(silent=True) or {}
    missing = [name for name in names if not data.get(name)]
    if missing:
        raise BadRequest(f"Missing field(s): {', '.join(missing)}")
    var = data.get('var', 'n')
    fmt = data.get('format', 'text')
    if fmt not in FORMATS:
        raise BadRequest(f"Unknown format: {fmt}")
    return data, var, fmt


def rendered(obj, fmt, var):
    return to_json_data(obj) if fmt == 'json' else render(obj, fmt, var)


def order_bound(value):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise BadRequest("max_order must be a positive integer")
    return value


def index_range(text):
    try:
        start, stop = parse_range(text)
    except Exception as e:
        raise BadRequest(str(e))
    if stop - start > MAX_RANGE:
        raise BadRequest(f"Range is limited to {MAX_RANGE} indices")
    return start, stop


@app.route('/health')
def health_check():
    """Health check endpoint"""
    return jsonify({
        'status': 'healthy',
        'timestamp': datetime.now().isoformat(),
        'database': 'connected',
        'version': __version__
    })


@app.route('/api/eval', methods=['POST'])
def evaluate():
    """Evaluate an expression at 'at' or on 'range' (A..B)"""
    try:
        data, var, fmt = request_fields('expr')
        S = parse_hts(data['expr'], var)

        if data.get('at') is not None:
            n = data['at']
            if not isinstance(n, int) or n < 0:
                raise BadRequest("Index must be a natural number")
            return ok({'at': n, 'value': format_rational(hts_eval(S, n))})

        if not data.get('range'):
            raise BadRequest("Either 'at' or 'range' is required")
        start, stop = index_range(data['range'])
        values = [format_rational(hts_eval(S, n)) for n in range(start, stop + 1)]
        return ok({'range': [start, stop], 'values': values})

    except Exception as e:
        return error_response(e)


@app.route('/api/rec', methods=['POST'])
def recurrence():
    """Derive a recurrence annihilating an expression"""
    try:
        data, var, fmt = request_fields('expr')
        max_order = order_bound(data.get('max_order'))
        S = parse_hts(data['expr'], var)
        L = hts_to_recurrence(S, max_order=max_order)
        db.record('rec', render(S, 'text', var), render(L, 'text', var))
        return ok({'order': L.order, 'recurrence': rendered(L, fmt, var)})

    except Exception as e:
        return error_response(e)


@app.route('/api/product', methods=['POST'])
def product():
    """Hadamard product of 'left' and 'right'"""
    try:
        data, var, fmt = request_fields('left', 'right')
        left, right = parse_hts(data['left'], var), parse_hts(data['right'], var)
        P = hts_product(left, right)
        query = f"({render(left, 'text', var)}) * ({render(right, 'text', var)})"
        db.record('prod', query, render(P, 'text', var))
        return ok({'result': rendered(P, fmt, var)})

    except Exception as e:
        return error_response(e)


@app.route('/api/equal', methods=['POST'])
def equal():
    """Decide whether 'left' and 'right' are the same sequence"""
    try:
        data, var, fmt = request_fields('left', 'right')
        left, right = parse_hts(data['left'], var), parse_hts(data['right'], var)
        verdict = hts_equal(left, right)
        query = f"{render(left, 'text', var)} == {render(right, 'text', var)}"
        db.record('equal', query, json.dumps(verdict), verdict)
        return ok({'equal': verdict})

    except Exception as e:
        return error_response(e)


@app.route('/api/normalize', methods=['POST'])
def normalize():
    """Normal form of an expression"""
    try:
        data, var, fmt = request_fields('expr')
        S = hts_normalize(parse_hts(data['expr'], var))
        db.record('normalize', data['expr'].strip(), render(S, 'text', var))
        return ok({'result': rendered(S, fmt, var), 'components': len(S.components)})

    except Exception as e:
        return error_response(e)


@app.route('/api/verify-rec', methods=['POST'])
def verify_recurrence():
    """Check that 'rec' annihilates 'expr' on 'range'"""
    try:
        data, var, fmt = request_fields('rec', 'expr', 'range')
        L = parse_recurrence(data['rec'], var)
        S = parse_hts(data['expr'], var)
        start, stop = index_range(data['range'])
        verdict = rec_verify(L, S, stop, n_min=start)
        query = f"{render(L, 'text', var)} ; {render(S, 'text', var)} ; {start}..{stop}"
        db.record('verify', query, json.dumps(verdict), verdict)
        return ok({'valid': verdict, 'range': [start, stop]})

    except Exception as e:
        return error_response(e)


@app.route('/api/history')
def get_history():
    """Journal entries with optional kind filter and pagination"""
    try:
        kind = request.args.get('kind')
        limit = request.args.get('limit', type=int, default=50)
        offset = request.args.get('offset', type=int, default=0)

        results = db.get_results(kind=kind, limit=limit + offset)
        page = results[offset:offset + limit]

        return jsonify({
            'success': True,
            'data': {
                'results': page,
                'limit': limit,
                'offset': offset,
                'has_more': len(results) > offset + len(page)
            },
            'timestamp': datetime.now().isoformat()
        })

    except Exception as e:
        logger.error(f"Error getting history: {e}")
        return jsonify({
            'success': False,
            'error': str(e)
        }), 500


@app.route('/api/stats')
def get_stats():
    """Get journal statistics"""
    try:
        return ok(db.get_stats())
    except Exception as e:
        logger.error(f"Error getting stats: {e}")
        return jsonify({
            'success': False,
            'error': str(e)
        }), 500


if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    debug = os.environ.get('DEBUG', 'false').lower() == 'true'

    logger.info(f"Starting hyperseq API on port {port}")
    logger.info("Available endpoints:")
    logger.info("  GET  /health - Health check")
    logger.info("  POST /api/eval - Evaluate an expression")
    logger.info("  POST /api/rec - Derive a recurrence")
    logger.info("  POST /api/product - Hadamard product")
    logger.info("  POST /api/equal - Zero-equivalence test")
    logger.info("  POST /api/normalize - Normal form")
    logger.info("  POST /api/verify-rec - Check a recurrence")
    logger.info("  GET  /api/history - Result journal")
    logger.info("  GET  /api/stats - Journal statistics")

    app.run(host='0.0.0.0', port=port, debug=debug)
