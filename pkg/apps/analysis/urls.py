from django.urls import path, include
from rest_framework.routers import DefaultRouter

from .views import AnalysisRunViewSet

router = DefaultRouter()
router.register(r'runs', AnalysisRunViewSet, basename='analysis-run')

urlpatterns = [
    path('', include(router.urls)),
]
