"""
app.py
HTTP 接口：请求体是场景 JSON（与场景文件同格式），返回与 --json 相同的报告字典。
"""
import logging

from flask import Flask, request, jsonify
from flask_cors import CORS

from config import load_settings
from errors import SceneError, UnclassifiableRoots
from scene_processor import SceneProcessor
from scene_store import scene_from_dict

logger = logging.getLogger(__name__)

app = Flask(__name__)
CORS(app)

settings = load_settings()
scene_processor = SceneProcessor(settings)


def _scene_from_request():
    data = request.get_json(silent=True)
    if data is None:
        raise SceneError("<json>", "请求体不是有效的 JSON")
    return scene_from_dict(data, name="request")


def _handle(action):
    try:
        scene = _scene_from_request()
        data = action(scene)
        logger.info("%s -> %s", request.path, data.get('type', data.get('agreement')))
        return jsonify({'success': True, 'data': data})
    except SceneError as e:
        return jsonify({'success': False, 'error': str(e), 'field': e.field}), 400
    except UnclassifiableRoots as e:
        return jsonify({'success': False, 'error': str(e)}), 422
    except ValueError as e:
        # 查询参数越界（steps < 2、grid 过小等）
        return jsonify({'success': False, 'error': str(e)}), 400
    except Exception as e:  # noqa: BLE001
        logger.exception("请求 %s 处理失败", request.path)
        return jsonify({'success': False, 'error': str(e)}), 500


@app.route('/api/health', methods=['GET'])
def health():
    return jsonify({'success': True, 'data': {'status': 'ok', 'grid': settings.grid, 'steps': settings.steps}})


@app.route('/api/classify', methods=['POST'])
def classify_scene():
    return _handle(scene_processor.classify)


@app.route('/api/contact', methods=['POST'])
def contact_scene():
    return _handle(scene_processor.contact)


@app.route('/api/sweep', methods=['POST'])
def sweep_scene():
    steps = request.args.get('steps', type=int)
    return _handle(lambda scene: scene_processor.sweep(scene, steps))


@app.route('/api/verify', methods=['POST'])
def verify_scene():
    grid = request.args.get('grid', type=int)
    return _handle(lambda scene: scene_processor.verify(scene, grid))


if __name__ == '__main__':
    logging.basicConfig(level=settings.log_level)
    print(f"[INFO] 访问地址: http://{settings.host}:{settings.port}")
    app.run(host=settings.host, port=settings.port)
