# 통합 테스트 (SIMULATION_SLOW_TESTS=1 이면 기준 수치 재현 테스트 포함)
