"""
快速启动脚本 - 检查依赖后启动 HTTP 服务
"""

import sys


def check_dependencies():
    """检查依赖是否已安装"""
    try:
        import flask
        import flask_cors
        import numpy
        import scipy
        import reportlab
        print("✅ 依赖检查通过")
        return True
    except ImportError as e:
        print(f"❌ 缺少依赖: {e}")
        print("请运行: pip install -r requirements.txt")
        return False


def self_check():
    """用一个已知场景跑一遍分类，确认数值核心可用"""
    from data_models import Sphere, StdHyperboloid
    from positions import classify

    kind = classify(StdHyperboloid(a=1.5, c=1.6), Sphere(center=(2.1, 2.2, 0.3), r=1.4))
    if kind.value != "E":
        print(f"❌ 自检失败: 期望类型 E，得到 {kind.value}")
        return False
    print("✅ 自检通过")
    return True


def main():
    """主函数"""
    print("=" * 60)
    print("双曲面 / 球 相对位置服务 - 启动检查")
    print("=" * 60)

    print("\n1. 检查依赖...")
    if not check_dependencies():
        sys.exit(1)

    print("\n2. 数值自检...")
    if not self_check():
        sys.exit(1)

    from app import app, settings

    print("\n3. 启动服务...")
    print("=" * 60)
    print(f"🌐 访问地址: http://{settings.host}:{settings.port}")
    print("=" * 60)
    print("\n按 Ctrl+C 停止服务\n")
    app.run(host=settings.host, port=settings.port)


if __name__ == '__main__':
    try:
        main()
    except KeyboardInterrupt:
        print("\n\n👋 服务已停止")
        sys.exit(0)
