# 시뮬레이션 앱 패키지
