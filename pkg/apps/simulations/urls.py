from django.urls import path
from . import views

urlpatterns = [
    path('runs/', views.StudyRunListCreateView.as_view(), name='study-run-list'),
    path('runs/<uuid:id>/', views.StudyRunDetailView.as_view(), name='study-run-detail'),
]
